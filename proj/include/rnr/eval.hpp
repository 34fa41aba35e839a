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

#ifndef RNR_EVAL_HPP_
#define RNR_EVAL_HPP_

#include <string>
#include <vector>

#include "rnr/reduction.hpp"

namespace rnr {

enum class EditTag { kCorrect, kSubstitution, kInsertion, kDeletion };

struct AlignedPair {
  std::string ref;  // empty for insertions
  std::string hyp;  // empty for deletions
  EditTag tag = EditTag::kCorrect;
};

struct AlignmentReport {
  std::vector<AlignedPair> pairs;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t matches = 0;
  std::size_t ref_length = 0;  // N

  std::size_t Edits() const { return substitutions + insertions + deletions; }
};

struct WerResult {
  double rate = 0.0;           // (S+I+D)/N; infinity when N == 0 and I > 0
  bool undefined = false;      // N == 0 with a non-empty hypothesis
  AlignmentReport report;
};

// Minimum-edit-distance alignment; ties prefer substitution, then
// insertion, then deletion.
AlignmentReport Align(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

WerResult Wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// WER over whole corpora: sums edits and reference lengths across lines.
WerResult CorpusWer(const std::vector<std::string>& ref_lines,
                    const std::vector<std::string>& hyp_lines);

// WER after applying the reduction to both sides.
WerResult RWer(const ReductionMap& m, const std::vector<std::string>& ref_lines,
               const std::vector<std::string>& hyp_lines);

struct SubCorrectionResult {
  double pct = 0.0;      // 100 * Y / X
  std::size_t x = 0;     // grapheme substitutions in the identity alignment
  std::size_t y = 0;     // of those, correct in the reduced alignment
  bool no_substitutions = false;  // X == 0
};

// Fraction of identity-system grapheme substitution errors that the reduced
// system predicts correctly, matched through reference-side grapheme
// positions.
SubCorrectionResult SubstitutionCorrectionPct(const std::vector<std::string>& ref_lines,
                                              const std::vector<std::string>& identity_hyp_lines,
                                              const ReductionMap& m,
                                              const std::vector<std::string>& reduced_hyp_lines);

// Splits a line into grapheme tokens (word separators included as tokens).
std::vector<std::string> GraphemeTokens(const ReductionMap& m, const std::string& line);

struct ReportRow {
  std::string system;
  double wer = 0.0;
  double rwer = 0.0;
  double ppl = 0.0;
};

// Aligned text table plus TSV, rows sorted by system name.
std::string RenderReport(std::vector<ReportRow> rows, bool tsv = false);

}  // namespace rnr

#endif  // RNR_EVAL_HPP_
