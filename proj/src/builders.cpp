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

#include "rnr/builders.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rnr {

namespace {
constexpr int kEps = SymbolTable::kEpsilon;
constexpr double kLn10 = 2.302585092994046;
}  // namespace

void CheckPenaltyDominatesEdits(const EditConfig& edit, const DictConfig& dict) {
  if (edit.d < 0) throw std::runtime_error("edit config: d must be >= 0");
  if (edit.lambda < 0) throw std::runtime_error("edit config: lambda must be >= 0");
  if (dict.eta < 0) throw std::runtime_error("dict config: eta must be >= 0");
  if (dict.vocabulary.empty()) throw std::runtime_error("dict config: empty vocabulary");
  if (!(dict.eta > edit.d * edit.lambda))
    throw std::runtime_error("dict config: eta (" + std::to_string(dict.eta) +
                             ") must exceed d*lambda (" +
                             std::to_string(edit.d * edit.lambda) + ")");
}

SymbolTablePtr MakeGraphemeSymbols(const std::vector<std::string>& alphabet) {
  auto syms = std::make_shared<SymbolTable>();
  syms->AddSymbol(kSeparator);
  for (const auto& g : alphabet) syms->AddSymbol(g);
  return syms;
}

SymbolTablePtr MakeWordSymbols(const std::vector<std::string>& words) {
  auto syms = std::make_shared<SymbolTable>();
  syms->AddSymbol(kUnk);
  for (const auto& w : words) syms->AddSymbol(w);
  return syms;
}

Wfst BuildReductionFst(const ReductionMap& m) {
  SymbolTablePtr in = MakeGraphemeSymbols(m.ReducedAlphabet());
  SymbolTablePtr out = MakeGraphemeSymbols(m.OriginalAlphabet());
  Wfst s(in, out);
  int q = s.AddState();
  s.SetStart(q);
  s.SetFinal(q, 0.0);
  int sep_in = in->FindOrThrow(kSeparator);
  int sep_out = out->FindOrThrow(kSeparator);
  s.AddArc(q, Arc{sep_in, sep_out, 0.0, q});
  for (const std::string& g : m.OriginalAlphabet()) {
    s.AddArc(q, Arc{in->FindOrThrow(m.MapGrapheme(g)), out->FindOrThrow(g), 0.0, q});
  }
  s.SortArcs();
  return s;
}

Wfst BuildEditFst(const std::vector<std::string>& alphabet, const EditConfig& cfg,
                  SymbolTablePtr grapheme_syms) {
  if (cfg.d < 0 || cfg.lambda < 0)
    throw std::runtime_error("edit fst: d and lambda must be non-negative");
  SymbolTablePtr syms = grapheme_syms ? grapheme_syms : MakeGraphemeSymbols(alphabet);
  Wfst e(syms, syms);
  std::vector<int> budget(cfg.d + 1);
  for (int j = 0; j <= cfg.d; ++j) {
    budget[j] = e.AddState();
    e.SetFinal(budget[j], 0.0);
  }
  e.SetStart(budget[0]);
  int sep = syms->FindOrThrow(kSeparator);
  std::vector<int> labels;
  for (const auto& g : alphabet) labels.push_back(syms->FindOrThrow(g));
  for (int j = 0; j <= cfg.d; ++j) {
    e.AddArc(budget[j], Arc{sep, sep, 0.0, budget[0]});  // budget is per word
    for (int a : labels) e.AddArc(budget[j], Arc{a, a, 0.0, budget[j]});
    if (j == cfg.d) continue;
    for (int a : labels) {
      e.AddArc(budget[j], Arc{a, kEps, cfg.lambda, budget[j + 1]});  // deletion
      e.AddArc(budget[j], Arc{kEps, a, cfg.lambda, budget[j + 1]});  // insertion
      for (int b : labels)
        if (b != a) e.AddArc(budget[j], Arc{a, b, cfg.lambda, budget[j + 1]});
    }
  }
  e.SortArcs();
  return e;
}

Wfst BuildDictionaryFst(const DictConfig& cfg, SymbolTablePtr grapheme_syms,
                        SymbolTablePtr word_syms) {
  Wfst l(grapheme_syms, word_syms);
  int root = l.AddState();
  l.SetStart(root);
  l.SetFinal(root, 0.0);  // the empty hypothesis
  // Every word path begins at `entry`, which is not final: a separator must
  // be followed by another word, so no segment may be empty.
  int entry = l.AddState();
  l.AddArc(root, Arc{kEps, kEps, 0.0, entry});
  int sep = grapheme_syms->FindOrThrow(kSeparator);
  int unk = word_syms->FindOrThrow(kUnk);

  std::map<std::string, std::vector<std::string>> seen;
  for (const auto& [word, spelling] : cfg.vocabulary) {
    if (spelling.empty())
      throw std::runtime_error("dictionary fst: word '" + word + "' has an empty spelling");
    auto [it, inserted] = seen.emplace(word, spelling);
    if (!inserted) {
      if (it->second != spelling)
        throw std::runtime_error("dictionary fst: word '" + word +
                                 "' has conflicting spellings");
      continue;
    }
    int wid = word_syms->FindOrThrow(word);
    int cur = entry;
    for (std::size_t i = 0; i < spelling.size(); ++i) {
      int g = grapheme_syms->FindOrThrow(spelling[i]);
      int next = l.AddState();
      l.AddArc(cur, Arc{g, i == 0 ? wid : kEps, 0.0, next});
      cur = next;
    }
    l.SetFinal(cur, 0.0);
    l.AddArc(cur, Arc{sep, kEps, 0.0, entry});
  }

  // unk branch: any non-empty grapheme segment at cost eta.
  int unk_state = l.AddState();
  l.SetFinal(unk_state, 0.0);
  l.AddArc(unk_state, Arc{sep, kEps, 0.0, entry});
  for (int g = 1; g < grapheme_syms->Size(); ++g) {
    if (g == sep) continue;
    l.AddArc(entry, Arc{g, unk, cfg.eta, unk_state});
    l.AddArc(unk_state, Arc{g, kEps, 0.0, unk_state});
  }
  l.SortArcs();
  return l;
}

Wfst BuildLmFst(const NGramModel& lm, SymbolTablePtr word_syms) {
  using Gram = std::vector<std::string>;
  const int order = lm.Order();
  Wfst g(word_syms, word_syms);

  // States: the empty history plus every gram that carries a backoff weight.
  std::map<Gram, int> state_of;
  auto ensure_state = [&](const Gram& h) {
    auto it = state_of.find(h);
    if (it != state_of.end()) return it->second;
    int s = g.AddState();
    state_of.emplace(h, s);
    return s;
  };
  ensure_state({});
  for (int k = 1; k < order; ++k)
    for (const auto& [gram, e] : lm.Grams(k))
      if (e.backoff) ensure_state(gram);
  // Histories of entries are states even without an explicit backoff weight.
  for (int k = 2; k <= order; ++k)
    for (const auto& [gram, e] : lm.Grams(k)) ensure_state(Gram(gram.begin(), gram.end() - 1));

  auto resolve = [&](Gram h) {
    while (!h.empty() && !state_of.count(h)) h.erase(h.begin());
    return state_of.at(h);
  };

  // Word arcs and final weights from explicit entries.
  for (int k = 1; k <= order; ++k) {
    for (const auto& [gram, e] : lm.Grams(k)) {
      Gram h(gram.begin(), gram.end() - 1);
      const std::string& w = gram.back();
      if (w == kSentStart) continue;
      int src = resolve(h);
      double cost = -e.logprob * kLn10;
      if (w == kSentEnd) {
        g.SetFinal(src, cost);
        continue;
      }
      int label = word_syms->Find(w);
      if (label < 0) continue;  // word outside the cascade vocabulary
      Gram next = gram;
      if (static_cast<int>(next.size()) > order - 1)
        next.erase(next.begin(), next.end() - (order - 1));
      g.AddArc(src, Arc{label, label, cost, resolve(next)});
    }
  }

  // Backoff arcs.
  for (const auto& [h, src] : state_of) {
    if (h.empty()) continue;
    auto& table = lm.Grams(static_cast<int>(h.size()));
    auto it = table.find(h);
    double bo = (it != table.end() && it->second.backoff) ? *it->second.backoff : 0.0;
    Gram shorter(h.begin() + 1, h.end());
    g.AddArc(src, Arc{0, 0, -bo * kLn10, resolve(shorter)});
  }

  Gram start{kSentStart};
  g.SetStart(resolve(start));
  g.SortArcs();
  return g;
}

}  // namespace rnr
