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

#ifndef RNR_PIPELINE_HPP_
#define RNR_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rnr {

struct PipelineConfig {
  std::string mapping;
  std::string train;
  std::string dev;
  std::string test;
  std::string outdir = "out";
  int order = 4;
  int d = 3;
  double lambda = 5.0;
  double eta = 100.0;
  double p_sub = 0.05;
  double p_del = 0.0;
  double p_ins = 0.0;
  std::uint64_t seed = 1;
  int jobs = 1;

  // Plain key=value file, '#' comments. Unknown keys are an error.
  static PipelineConfig Load(const std::string& path);
  void Validate() const;  // paths must resolve
};

struct VocabInfo {
  std::vector<std::pair<std::string, long long>> words;      // sorted by word
  std::vector<std::pair<std::string, long long>> graphemes;  // sorted by grapheme
};

// Unique words and code-point graphemes with counts, reproducible order.
VocabInfo ExtractVocab(const std::vector<std::string>& lines);

struct PipelineOutcome {
  // System label -> WER, for identity/reduced at d=0 and the configured d.
  double wer_identity_d0 = 0.0, wer_identity_d = 0.0;
  double wer_reduced_d0 = 0.0, wer_reduced_d = 0.0;
  double ppl_identity = 0.0, ppl_reduced = 0.0;
  std::string report;
};

// The full synthetic experiment: reduce, train LM, corrupt the test text,
// reconstruct with identity and reduced assets at d=0 and d, score, report.
// Artifacts are written under cfg.outdir.
PipelineOutcome RunPipeline(const PipelineConfig& cfg, std::ostream& log);

std::vector<std::string> ReadLines(const std::string& path);
void WriteLinesFile(const std::string& path, const std::vector<std::string>& lines);

}  // namespace rnr

#endif  // RNR_PIPELINE_HPP_
