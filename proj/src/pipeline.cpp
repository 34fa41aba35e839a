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

#include "rnr/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rnr/eval.hpp"
#include "rnr/reconstruct.hpp"

namespace rnr {

namespace fs = std::filesystem;

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void WriteLinesFile(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& l : lines) out << l << "\n";
}

PipelineConfig PipelineConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  PipelineConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config " + path + ": line " + std::to_string(lineno) +
                               ": expected key=value");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    try {
      if (key == "mapping") cfg.mapping = val;
      else if (key == "train") cfg.train = val;
      else if (key == "dev") cfg.dev = val;
      else if (key == "test") cfg.test = val;
      else if (key == "outdir") cfg.outdir = val;
      else if (key == "order") cfg.order = std::stoi(val);
      else if (key == "d") cfg.d = std::stoi(val);
      else if (key == "lambda") cfg.lambda = std::stod(val);
      else if (key == "eta") cfg.eta = std::stod(val);
      else if (key == "p_sub") cfg.p_sub = std::stod(val);
      else if (key == "p_del") cfg.p_del = std::stod(val);
      else if (key == "p_ins") cfg.p_ins = std::stod(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "jobs") cfg.jobs = std::stoi(val);
      else throw std::runtime_error("unknown key '" + key + "'");
    } catch (const std::exception& e) {
      throw std::runtime_error("config " + path + ": line " + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  // Paths are relative to the config file's directory.
  fs::path base = fs::path(path).parent_path();
  auto fix = [&](std::string& p) {
    if (!p.empty() && fs::path(p).is_relative()) p = (base / p).string();
  };
  fix(cfg.mapping);
  fix(cfg.train);
  fix(cfg.dev);
  fix(cfg.test);
  return cfg;
}

void PipelineConfig::Validate() const {
  for (const std::string* p : {&mapping, &train, &test}) {
    if (p->empty()) throw std::runtime_error("config: mapping, train and test are required");
    if (!fs::exists(*p)) throw std::runtime_error("config: path does not exist: " + *p);
  }
  if (!dev.empty() && !fs::exists(dev))
    throw std::runtime_error("config: path does not exist: " + dev);
}

VocabInfo ExtractVocab(const std::vector<std::string>& lines) {
  std::map<std::string, long long> words, graphemes;
  for (const auto& line : lines) {
    std::istringstream ss(line);
    std::string w;
    while (ss >> w) {
      ++words[w];
      for (const auto& g : Utf8Codepoints(w)) ++graphemes[g];
    }
  }
  VocabInfo v;
  v.words.assign(words.begin(), words.end());
  v.graphemes.assign(graphemes.begin(), graphemes.end());
  return v;
}

namespace {

std::vector<std::string> ApplyLines(const ReductionMap& m, const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(m.Apply(l, /*permissive=*/true));
  return out;
}

std::vector<std::string> ReconToLines(const std::vector<Reconstruction>& recons) {
  std::vector<std::string> out;
  out.reserve(recons.size());
  for (const auto& r : recons) {
    std::string s;
    for (const auto& w : r.words) {
      if (!s.empty()) s += ' ';
      s += w;
    }
    out.push_back(std::move(s));
  }
  return out;
}

void WriteReconTsv(const std::string& path, const std::vector<Reconstruction>& recons) {
  std::ofstream out(path);
  out << std::fixed << std::setprecision(6);
  for (const auto& r : recons) {
    std::string s;
    for (const auto& w : r.words) {
      if (!s.empty()) s += ' ';
      s += w;
    }
    if (r.ok)
      out << r.id << "\t" << s << "\t" << r.total_cost << "\t" << r.edit_cost << "\t"
          << r.unk_cost << "\t" << r.lm_cost << "\n";
    else
      out << r.id << "\tERROR\t" << r.error << "\n";
  }
}

}  // namespace

PipelineOutcome RunPipeline(const PipelineConfig& cfg, std::ostream& log) {
  cfg.Validate();
  fs::create_directories(cfg.outdir);
  fs::path out(cfg.outdir);

  std::vector<std::string> train_lines = ReadLines(cfg.train);
  std::vector<std::string> test_lines = ReadLines(cfg.test);
  ReductionMap rho = ReductionMap::Load(cfg.mapping);

  VocabInfo vinfo = ExtractVocab(train_lines);
  VocabInfo vtest = ExtractVocab(test_lines);
  std::map<std::string, long long> alpha_counts(vinfo.graphemes.begin(), vinfo.graphemes.end());
  for (const auto& [g, c] : vtest.graphemes) alpha_counts[g] += c;
  std::vector<std::string> alphabet;
  for (const auto& [g, c] : alpha_counts) alphabet.push_back(g);
  ReductionMap identity = ReductionMap::Identity(alphabet);
  log << "# seed=" << cfg.seed << " d=" << cfg.d << " lambda=" << cfg.lambda
      << " eta=" << cfg.eta << " order=" << cfg.order << " p_sub=" << cfg.p_sub << "\n";
  log << "alphabet: " << rho.OriginalAlphabet().size() << " -> " << rho.ReducedAlphabet().size()
      << " (" << rho.Name() << ")\n";

  DictConfig dict;
  dict.eta = cfg.eta;
  for (const auto& [w, c] : vinfo.words) dict.vocabulary.emplace_back(w, rho.SplitGraphemes(w));
  {
    std::vector<std::string> vocab_lines;
    for (const auto& [w, c] : vinfo.words) vocab_lines.push_back(w + "\t" + std::to_string(c));
    WriteLinesFile((out / "vocab.tsv").string(), vocab_lines);
  }

  NGramModel lm = NGramModel::Train(train_lines, cfg.order);
  lm.ExportArpa((out / "lm.arpa").string());

  // Synthetic ASR channel: corrupt the original-alphabet test text once,
  // then view it through each system's reduction.
  std::string noisy_blob;
  for (const auto& l : test_lines) noisy_blob += l + "\n";
  noisy_blob = SimulateNoise(noisy_blob, alphabet, cfg.p_sub, cfg.p_del, cfg.p_ins, cfg.seed);
  std::vector<std::string> noisy_lines;
  {
    std::istringstream ss(noisy_blob);
    std::string l;
    while (std::getline(ss, l)) noisy_lines.push_back(l);
  }
  WriteLinesFile((out / "test_noisy.txt").string(), noisy_lines);

  PipelineOutcome res;
  struct Sys {
    const char* name;
    const ReductionMap* map;
    int d;
    double* wer_slot;
  };
  std::vector<Sys> systems = {
      {"identity", &identity, 0, &res.wer_identity_d0},
      {"identity", &identity, cfg.d, &res.wer_identity_d},
      {rho.Name().c_str(), &rho, 0, &res.wer_reduced_d0},
      {rho.Name().c_str(), &rho, cfg.d, &res.wer_reduced_d},
  };
  std::vector<ReportRow> rows;
  for (const Sys& sys : systems) {
    std::vector<std::string> hyp = ApplyLines(*sys.map, noisy_lines);
    std::string tag = std::string(sys.name) + "_d" + std::to_string(sys.d);
    WriteLinesFile((out / ("hyp_" + tag + ".txt")).string(), hyp);
    CascadeAssets assets(*sys.map, dict, EditConfig{sys.d, cfg.lambda}, lm);
    std::vector<Reconstruction> recons = ReconstructLines(hyp, assets, cfg.jobs);
    WriteReconTsv((out / ("recon_" + tag + ".tsv")).string(), recons);
    std::vector<std::string> hyp_words = ReconToLines(recons);
    WerResult wer = CorpusWer(test_lines, hyp_words);
    WerResult rwer = RWer(*sys.map, test_lines, hyp_words);
    *sys.wer_slot = wer.rate;
    rows.push_back(ReportRow{tag, wer.rate, rwer.rate, 0.0});
    log << tag << ": WER " << std::fixed << std::setprecision(2) << 100.0 * wer.rate
        << "% (S=" << wer.report.substitutions << " I=" << wer.report.insertions
        << " D=" << wer.report.deletions << " N=" << wer.report.ref_length << ")\n";
  }

  // Trigram perplexity of the original text vs its reduced-alphabet view.
  NGramModel tri_orig = NGramModel::Train(train_lines, 3);
  NGramModel tri_red = NGramModel::Train(ApplyLines(rho, train_lines), 3);
  res.ppl_identity = tri_orig.Perplexity(test_lines).perplexity;
  res.ppl_reduced = tri_red.Perplexity(ApplyLines(rho, test_lines)).perplexity;
  log << "ppl identity=" << std::setprecision(2) << res.ppl_identity
      << " reduced=" << res.ppl_reduced << "\n";
  rows[1].ppl = res.ppl_identity;
  rows[3].ppl = res.ppl_reduced;

  res.report = RenderReport(rows);
  {
    std::ofstream rep(out / "report.txt");
    rep << res.report;
    std::ofstream tsv(out / "report.tsv");
    tsv << RenderReport(rows, /*tsv=*/true);
  }
  return res;
}

}  // namespace rnr
