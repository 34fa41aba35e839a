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

#ifndef RNR_RECONSTRUCT_HPP_
#define RNR_RECONSTRUCT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rnr/builders.hpp"
#include "rnr/ngram.hpp"
#include "rnr/reduction.hpp"
#include "rnr/wfst.hpp"

namespace rnr {

// One 1-best reduced-alphabet hypothesis.
struct Hypothesis {
  std::string id;
  std::vector<std::string> words;  // reduced-grapheme word strings
};

struct Reconstruction {
  std::string id;
  std::vector<std::string> words;  // may include <unk>
  double total_cost = 0.0;
  double edit_cost = 0.0;
  double unk_cost = 0.0;
  double lm_cost = 0.0;
  bool ok = true;
  std::string error;
};

// The cascade machines plus everything needed to decompose path costs.
class CascadeAssets {
 public:
  CascadeAssets(const ReductionMap& mapping, DictConfig dict, EditConfig edit,
                const NGramModel& lm);

  const Wfst& S() const { return s_; }
  const Wfst& E() const { return e_; }
  const Wfst& L() const { return l_; }
  const Wfst& G() const { return g_; }
  const ReductionMap& Mapping() const { return mapping_; }
  const NGramModel& Lm() const { return lm_; }
  const EditConfig& Edit() const { return edit_; }
  const DictConfig& Dict() const { return dict_; }
  const SymbolTablePtr& ReducedSymbols() const { return reduced_syms_; }
  const SymbolTablePtr& WordSymbols() const { return word_syms_; }

 private:
  ReductionMap mapping_;
  DictConfig dict_;
  EditConfig edit_;
  const NGramModel& lm_;
  SymbolTablePtr reduced_syms_;
  SymbolTablePtr word_syms_;
  Wfst s_, e_, l_, g_;
};

// shortestpath(H o S o E o L o G), composed left to right so the hypothesis
// prunes everything downstream.
Reconstruction Reconstruct(const Hypothesis& h, const CascadeAssets& assets);

// One hypothesis per line, `id<TAB>text` or bare text. Order-preserving and
// deterministic at any parallelism level; per-line failures are recorded in
// the result rather than thrown.
std::vector<Reconstruction> ReconstructFile(const std::string& path, const CascadeAssets& assets,
                                            int parallelism = 1);
std::vector<Reconstruction> ReconstructLines(const std::vector<std::string>& lines,
                                             const CascadeAssets& assets, int parallelism = 1);

// Grapheme-level noise channel standing in for ASR errors: independent
// substitution / deletion / insertion per grapheme; separators untouched.
std::string SimulateNoise(const std::string& text, const std::vector<std::string>& alphabet,
                          double p_sub, double p_del, double p_ins, std::uint64_t seed);

Hypothesis ParseHypothesisLine(const std::string& line);

}  // namespace rnr

#endif  // RNR_RECONSTRUCT_HPP_
