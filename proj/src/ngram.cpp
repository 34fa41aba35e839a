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

#include "rnr/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rnr {

namespace {
using Gram = std::vector<std::string>;

Gram Suffix(const Gram& g) { return Gram(g.begin() + 1, g.end()); }
}  // namespace

std::vector<std::string> SplitWords(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

NGramModel NGramModel::Train(const std::vector<std::string>& corpus, int order,
                             std::optional<double> discount) {
  if (order < 1) throw std::runtime_error("ngram: order must be >= 1");
  if (corpus.empty()) throw std::runtime_error("ngram: empty training corpus");
  if (discount && (*discount < 0.0 || *discount >= 1.0))
    throw std::runtime_error("ngram: discount must be in [0, 1)");

  // Raw counts per order.
  std::vector<std::map<Gram, long long>> raw(order);
  bool any_token = false;
  for (const std::string& line : corpus) {
    Gram toks = SplitWords(line);
    if (!toks.empty()) any_token = true;
    toks.insert(toks.begin(), kSentStart);
    toks.push_back(kSentEnd);
    for (int k = 1; k <= order; ++k) {
      for (std::size_t i = 0; i + k <= toks.size(); ++i) {
        Gram g(toks.begin() + i, toks.begin() + i + k);
        if (g.back() == kSentStart) continue;  // nothing predicts <s>
        ++raw[k - 1][g];
      }
    }
  }
  if (!any_token) throw std::runtime_error("ngram: corpus contains no tokens");

  // Used counts: raw at the top order, continuation counts (distinct left
  // contexts) below, except for grams anchored at <s>, which keep raw counts.
  std::vector<std::map<Gram, long long>> used(order);
  used[order - 1] = raw[order - 1];
  for (int k = order - 1; k >= 1; --k) {
    for (const auto& [g, c] : raw[k - 1]) {
      if (g.front() == kSentStart) {
        used[k - 1][g] = c;
      } else {
        used[k - 1][g] = 0;
      }
    }
    for (const auto& [g, c] : raw[k]) {  // (k+1)-grams
      Gram suf = Suffix(g);
      if (suf.front() != kSentStart) ++used[k - 1][suf];
    }
  }

  NGramModel lm(order);
  lm.discounts_.resize(order, 0.75);
  for (int k = 1; k <= order; ++k) {
    if (discount) {
      lm.discounts_[k - 1] = *discount;
      continue;
    }
    long long n1 = 0, n2 = 0;
    for (const auto& [g, c] : used[k - 1]) {
      if (g.front() == std::string(kSentStart) && g.size() == 1) continue;
      if (c == 1) ++n1;
      if (c == 2) ++n2;
    }
    lm.discounts_[k - 1] = (n1 > 0 && n2 > 0) ? double(n1) / double(n1 + 2 * n2) : 0.75;
  }

  // Predicted vocabulary: seen words plus </s> and <unk>, never <s>.
  std::set<std::string> vocab;
  for (const auto& [g, c] : raw[0])
    if (g[0] != kSentStart) vocab.insert(g[0]);
  vocab.insert(kSentEnd);
  vocab.insert(kUnk);
  double p_uniform = 1.0 / double(vocab.size());

  // Unigrams.
  {
    double d1 = lm.discounts_[0];
    double total = 0.0;
    long long seen = 0;
    for (const std::string& w : vocab) {
      auto it = used[0].find({w});
      long long c = it == used[0].end() ? 0 : it->second;
      total += double(c);
      if (c > 0) ++seen;
    }
    double gamma = d1 * double(seen) / total;
    for (const std::string& w : vocab) {
      auto it = used[0].find({w});
      long long c = it == used[0].end() ? 0 : it->second;
      double p = std::max(double(c) - d1, 0.0) / total + gamma * p_uniform;
      lm.tables_[0][{w}] = Entry{std::log10(p), std::nullopt};
    }
    lm.tables_[0][{kSentStart}] = Entry{-99.0, std::nullopt};
  }

  // Higher orders, bottom-up, interpolating with the already-built lower
  // order via the backoff recursion.
  for (int k = 2; k <= order; ++k) {
    double dk = lm.discounts_[k - 1];
    // Group grams by history.
    std::map<Gram, std::vector<std::pair<std::string, long long>>> by_hist;
    for (const auto& [g, c] : used[k - 1]) {
      if (c <= 0) continue;
      Gram h(g.begin(), g.end() - 1);
      by_hist[h].emplace_back(g.back(), c);
    }
    for (const auto& [h, grams] : by_hist) {
      double denom = 0.0;
      for (const auto& [w, c] : grams) denom += double(c);
      double gamma = dk * double(grams.size()) / denom;
      Gram h_low = Suffix(h);
      for (const auto& [w, c] : grams) {
        double p_low = std::pow(10.0, lm.ScoreWord(h_low, w));
        double p = std::max(double(c) - dk, 0.0) / denom + gamma * p_low;
        Gram g = h;
        g.push_back(w);
        lm.tables_[k - 1][g] = Entry{std::log10(p), std::nullopt};
      }
      // Backoff weight lives on the history's entry one order down.
      auto hit = lm.tables_[k - 2].find(h);
      if (hit == lm.tables_[k - 2].end())
        throw std::runtime_error("ngram: history without lower-order entry");
      hit->second.backoff = std::log10(gamma);
    }
  }
  return lm;
}

double NGramModel::ScoreWord(const std::vector<std::string>& context,
                             const std::string& word) const {
  std::string w = word;
  if (tables_[0].find({w}) == tables_[0].end()) w = kUnk;

  // Longest usable context.
  Gram h;
  std::size_t maxlen = std::min<std::size_t>(context.size(), order_ - 1);
  h.assign(context.end() - maxlen, context.end());

  double backoff_acc = 0.0;
  while (true) {
    Gram g = h;
    g.push_back(w);
    auto& table = tables_[g.size() - 1];
    auto it = table.find(g);
    if (it != table.end()) return backoff_acc + it->second.logprob;
    if (h.empty())
      throw std::runtime_error("ngram: no unigram entry for '" + w + "'");
    auto hit = tables_[h.size() - 1].find(h);
    if (hit != tables_[h.size() - 1].end() && hit->second.backoff)
      backoff_acc += *hit->second.backoff;
    h.erase(h.begin());
  }
}

double NGramModel::ScoreSentence(const std::string& sentence) const {
  Gram toks = SplitWords(sentence);
  Gram context{kSentStart};
  double total = 0.0;
  for (const std::string& w : toks) {
    total += ScoreWord(context, w);
    context.push_back(tables_[0].count({w}) ? w : kUnk);
  }
  total += ScoreWord(context, kSentEnd);
  return total;
}

NGramModel::PplResult NGramModel::Perplexity(const std::vector<std::string>& corpus) const {
  if (corpus.empty()) throw std::runtime_error("ngram: empty corpus for perplexity");
  PplResult r;
  for (const std::string& line : corpus) {
    Gram toks = SplitWords(line);
    r.tokens += toks.size() + 1;
    for (const std::string& w : toks)
      if (!tables_[0].count({w})) ++r.oov;
    r.total_log10 += ScoreSentence(line);
  }
  if (r.tokens == 0) throw std::runtime_error("ngram: corpus contains no tokens");
  r.perplexity = std::pow(10.0, -r.total_log10 / double(r.tokens));
  return r;
}

std::vector<std::string> NGramModel::Vocabulary() const {
  std::vector<std::string> out;
  for (const auto& [g, e] : tables_[0])
    if (g[0] != kSentStart) out.push_back(g[0]);
  return out;
}

void NGramModel::ExportArpa(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("ngram: cannot write " + path);
  out << std::setprecision(12);
  out << "\\data\\\n";
  for (int k = 1; k <= order_; ++k)
    out << "ngram " << k << "=" << tables_[k - 1].size() << "\n";
  for (int k = 1; k <= order_; ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const auto& [g, e] : tables_[k - 1]) {
      out << e.logprob;
      for (const auto& w : g) out << (&w == &g.front() ? "\t" : " ") << w;
      if (e.backoff) out << "\t" << *e.backoff;
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
}

NGramModel NGramModel::ImportArpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ngram: cannot open " + path);
  std::string line;
  // Find \data\ header.
  std::vector<std::size_t> declared;
  while (std::getline(in, line)) {
    if (line.rfind("\\data\\", 0) == 0) break;
  }
  if (!in) throw std::runtime_error("ngram arpa: missing \\data\\ section");
  while (std::getline(in, line) && line.rfind("ngram ", 0) == 0) {
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("ngram arpa: malformed count line: " + line);
    int k = std::stoi(line.substr(6, eq - 6));
    std::size_t n = std::stoull(line.substr(eq + 1));
    if (k != static_cast<int>(declared.size()) + 1)
      throw std::runtime_error("ngram arpa: out-of-order count line: " + line);
    declared.push_back(n);
  }
  int order = static_cast<int>(declared.size());
  if (order < 1) throw std::runtime_error("ngram arpa: no ngram counts declared");

  NGramModel lm(order);
  int cur = 0;
  bool ended = false;
  do {
    if (line.empty()) continue;
    if (line.rfind("\\end\\", 0) == 0) {
      ended = true;
      break;
    }
    if (line[0] == '\\') {
      auto dash = line.find("-grams:");
      if (dash == std::string::npos)
        throw std::runtime_error("ngram arpa: unexpected section header: " + line);
      cur = std::stoi(line.substr(1, dash - 1));
      if (cur < 1 || cur > order)
        throw std::runtime_error("ngram arpa: section order out of range: " + line);
      continue;
    }
    if (cur == 0) continue;
    std::istringstream ls(line);
    double lp;
    if (!(ls >> lp)) throw std::runtime_error("ngram arpa: malformed entry: " + line);
    Gram g(cur);
    for (int i = 0; i < cur; ++i)
      if (!(ls >> g[i])) throw std::runtime_error("ngram arpa: truncated entry: " + line);
    Entry e{lp, std::nullopt};
    double bo;
    if (ls >> bo) e.backoff = bo;
    lm.tables_[cur - 1][g] = e;
  } while (std::getline(in, line));
  if (!ended) throw std::runtime_error("ngram arpa: missing \\end\\ marker");
  for (int k = 1; k <= order; ++k) {
    if (lm.tables_[k - 1].size() != declared[k - 1])
      throw std::runtime_error("ngram arpa: declared ngram " + std::to_string(k) + "=" +
                               std::to_string(declared[k - 1]) + " but read " +
                               std::to_string(lm.tables_[k - 1].size()));
  }
  return lm;
}

}  // namespace rnr
