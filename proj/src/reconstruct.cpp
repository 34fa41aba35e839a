// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rnr/reconstruct.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace rnr {

namespace {
constexpr double kLn10 = 2.302585092994046;

// Longest-first split of a word against a fixed grapheme inventory,
// falling back to single code points.
std::vector<std::string> SplitByAlphabet(const std::string& word,
                                         const std::set<std::string>& alphabet,
                                         std::size_t max_bytes) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < word.size();) {
    std::size_t take = 0;
    std::size_t limit = std::min(max_bytes, word.size() - i);
    for (std::size_t len = limit; len >= 1; --len) {
      if (alphabet.count(word.substr(i, len))) {
        take = len;
        break;
      }
    }
    if (take == 0) {
      auto cps = Utf8Codepoints(word.substr(i));
      take = cps.front().size();
    }
    out.push_back(word.substr(i, take));
    i += take;
  }
  return out;
}

}  // namespace

CascadeAssets::CascadeAssets(const ReductionMap& mapping, DictConfig dict, EditConfig edit,
                             const NGramModel& lm)
    : mapping_(mapping),
      dict_(std::move(dict)),
      edit_(edit),
      lm_(lm),
      reduced_syms_(MakeGraphemeSymbols(mapping.ReducedAlphabet())),
      word_syms_([this] {
        std::vector<std::string> words;
        for (const auto& [w, sp] : dict_.vocabulary) words.push_back(w);
        return MakeWordSymbols(words);
      }()),
      s_(BuildReductionFst(mapping_)),
      e_(BuildEditFst(mapping_.OriginalAlphabet(), edit_,
                      MakeGraphemeSymbols(mapping_.OriginalAlphabet()))),
      l_(BuildDictionaryFst(dict_, MakeGraphemeSymbols(mapping_.OriginalAlphabet()), word_syms_)),
      g_(BuildLmFst(lm_, word_syms_)) {
  CheckPenaltyDominatesEdits(edit_, dict_);
}

Reconstruction Reconstruct(const Hypothesis& h, const CascadeAssets& assets) {
  Reconstruction r;
  r.id = h.id;
  std::set<std::string> reduced(assets.Mapping().ReducedAlphabet().begin(),
                                assets.Mapping().ReducedAlphabet().end());
  std::size_t max_bytes = 1;
  for (const auto& g : reduced) max_bytes = std::max(max_bytes, g.size());

  std::vector<std::string> seq;
  for (std::size_t i = 0; i < h.words.size(); ++i) {
    if (i > 0) seq.push_back(kSeparator);
    for (auto& g : SplitByAlphabet(h.words[i], reduced, max_bytes)) seq.push_back(std::move(g));
  }

  Wfst chain = MakeLinearAcceptor(seq, assets.ReducedSymbols());
  Wfst c = Trim(Compose(chain, assets.S()));
  c = Trim(Compose(c, assets.E()));
  c = Trim(Compose(c, assets.L()));
  c = Trim(Compose(c, assets.G()));
  ShortestPathResult sp = ShortestPath(c);
  if (sp.empty_language) {
    r.ok = false;
    r.error = "cascade produced an empty language (asset mismatch?)";
    return r;
  }
  r.words = sp.OutputStrings(c);
  r.total_cost = sp.cost;
  std::size_t unks = std::count(r.words.begin(), r.words.end(), std::string(kUnk));
  r.unk_cost = assets.Dict().eta * double(unks);
  std::string joined;
  for (const auto& w : r.words) {
    if (!joined.empty()) joined += ' ';
    joined += w;
  }
  r.lm_cost = -assets.Lm().ScoreSentence(joined) * kLn10;
  r.edit_cost = r.total_cost - r.unk_cost - r.lm_cost;
  return r;
}

Hypothesis ParseHypothesisLine(const std::string& line) {
  Hypothesis h;
  std::string text = line;
  auto tab = line.find('\t');
  if (tab != std::string::npos) {
    h.id = line.substr(0, tab);
    text = line.substr(tab + 1);
  }
  h.words = SplitWords(text);
  return h;
}

std::vector<Reconstruction> ReconstructLines(const std::vector<std::string>& lines,
                                             const CascadeAssets& assets, int parallelism) {
  std::vector<Reconstruction> out(lines.size());
  int jobs = std::max(1, parallelism);
  auto work = [&](int tid) {
    for (std::size_t i = tid; i < lines.size(); i += jobs) {
      Hypothesis h = ParseHypothesisLine(lines[i]);
      if (h.id.empty()) h.id = std::to_string(i + 1);
      try {
        out[i] = Reconstruct(h, assets);
      } catch (const std::exception& e) {
        out[i].id = h.id;
        out[i].ok = false;
        out[i].error = e.what();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(work, t);
    for (auto& t : threads) t.join();
  }
  return out;
}

std::vector<Reconstruction> ReconstructFile(const std::string& path, const CascadeAssets& assets,
                                            int parallelism) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("reconstruct: cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return ReconstructLines(lines, assets, parallelism);
}

std::string SimulateNoise(const std::string& text, const std::vector<std::string>& alphabet,
                          double p_sub, double p_del, double p_ins, std::uint64_t seed) {
  if (p_sub < 0 || p_sub >= 1 || p_del < 0 || p_del >= 1 || p_ins < 0 || p_ins >= 1 ||
      p_sub + p_del > 1)
    throw std::runtime_error("simulate_noise: probabilities must lie in [0, 1)");
  std::set<std::string> alpha(alphabet.begin(), alphabet.end());
  std::size_t max_bytes = 1;
  for (const auto& g : alpha) max_bytes = std::max(max_bytes, g.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);

  std::string out;
  out.reserve(text.size());
  std::istringstream in(text);
  std::string line;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (!first_line) out.push_back('\n');
    first_line = false;
    std::size_t i = 0;
    while (i < line.size()) {
      unsigned char c = static_cast<unsigned char>(line[i]);
      if (c < 0x80 && std::isspace(c)) {
        out.push_back(line[i]);
        ++i;
        continue;
      }
      auto gs = SplitByAlphabet(line.substr(i), alpha, max_bytes);
      const std::string g = gs.front();
      i += g.size();
      double u = unif(rng);
      if (u < p_sub) {
        std::string repl = g;
        while (repl == g && alphabet.size() > 1) repl = alphabet[pick(rng)];
        out += repl;
      } else if (u < p_sub + p_del) {
        // deleted
      } else {
        out += g;
      }
      if (p_ins > 0 && unif(rng) < p_ins) out += alphabet[pick(rng)];
    }
  }
  if (!text.empty() && text.back() == '\n') out.push_back('\n');
  return out;
}

}  // namespace rnr
