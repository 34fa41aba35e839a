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

#ifndef RNR_BUILDERS_HPP_
#define RNR_BUILDERS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "rnr/ngram.hpp"
#include "rnr/reduction.hpp"
#include "rnr/wfst.hpp"

namespace rnr {

// Word separator symbol on the grapheme side of the cascade.
inline constexpr const char* kSeparator = "▁";  // ▁

struct EditConfig {
  int d = 3;           // max edits per word
  double lambda = 5.0; // cost per edit
};

struct DictConfig {
  // (word, spelling in original-alphabet graphemes)
  std::vector<std::pair<std::string, std::vector<std::string>>> vocabulary;
  double eta = 100.0;  // <unk> penalty
};

// eta must strictly dominate the worst per-word edit cost.
void CheckPenaltyDominatesEdits(const EditConfig& edit, const DictConfig& dict);

// Grapheme symbol tables: [<eps>, separator, alphabet...].
SymbolTablePtr MakeGraphemeSymbols(const std::vector<std::string>& alphabet);
// Word symbol table: [<eps>, <unk>, words...].
SymbolTablePtr MakeWordSymbols(const std::vector<std::string>& words);

// S: one-state transducer mapping each reduced grapheme to every original
// grapheme in its class at cost 0; the separator maps to itself.
Wfst BuildReductionFst(const ReductionMap& m);

// E: per-word edit machine over the original alphabet. Identity moves are
// free; substitutions, insertions and deletions cost lambda and consume one
// unit of a d-sized budget that the separator resets. Edits never produce,
// consume or cross a separator.
Wfst BuildEditFst(const std::vector<std::string>& alphabet, const EditConfig& cfg,
                  SymbolTablePtr grapheme_syms = nullptr);

// L: grapheme-to-word transducer. Each vocabulary word is a zero-cost path
// emitting the word label on its first grapheme arc; an unk branch accepts
// any non-empty grapheme segment at cost eta. Word boundaries loop to the
// root on the separator.
Wfst BuildDictionaryFst(const DictConfig& cfg, SymbolTablePtr grapheme_syms,
                        SymbolTablePtr word_syms);

// G: backoff n-gram acceptor. Word arcs cost -log p, epsilon backoff arcs
// cost -log(backoff weight), final weights from the </s> probability.
Wfst BuildLmFst(const NGramModel& lm, SymbolTablePtr word_syms);

}  // namespace rnr

#endif  // RNR_BUILDERS_HPP_
