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

#ifndef RNR_REDUCTION_HPP_
#define RNR_REDUCTION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rnr {

// Many-to-one grapheme map from an original alphabet onto a reduced one.
// A grapheme is a UTF-8 string, usually one code point; mapping files may
// declare multi-code-point clusters, matched longest-first.
class ReductionMap {
 public:
  ReductionMap(std::string name, std::vector<std::pair<std::string, std::string>> pairs);

  // TSV, two columns `original<TAB>reduced`, '#' comments.
  static ReductionMap Load(const std::string& path);
  void Write(const std::string& path) const;

  // Identity map over the given alphabet.
  static ReductionMap Identity(const std::vector<std::string>& alphabet);

  // Random partition of `alphabet` into exactly `target_size` non-empty
  // classes, each named after its first member. Deterministic per seed.
  static ReductionMap Random(const std::vector<std::string>& alphabet, int target_size,
                             std::uint64_t seed);

  // Grapheme-wise substitution over one-utterance-per-line text. Whitespace
  // and ASCII digits pass through. Unknown graphemes throw unless
  // `permissive`, in which case they pass through and are counted.
  std::string Apply(const std::string& text, bool permissive = false,
                    std::size_t* unknown_count = nullptr) const;

  const std::string& Name() const { return name_; }
  const std::vector<std::string>& OriginalAlphabet() const { return original_; }
  const std::vector<std::string>& ReducedAlphabet() const { return reduced_; }
  const std::string& MapGrapheme(const std::string& g) const;

  // Splits a word (no whitespace) into graphemes of the original alphabet,
  // longest match first. Unknown code points become single-char graphemes.
  std::vector<std::string> SplitGraphemes(const std::string& word) const;

  bool IsIdentityShaped() const { return original_.size() == reduced_.size(); }

 private:
  std::string name_;
  std::vector<std::string> original_;
  std::vector<std::string> reduced_;
  std::map<std::string, std::string> map_;
  std::size_t max_grapheme_bytes_ = 0;
};

// Splits a UTF-8 string into code points. Malformed bytes are kept as
// single-byte units.
std::vector<std::string> Utf8Codepoints(const std::string& s);

}  // namespace rnr

#endif  // RNR_REDUCTION_HPP_
