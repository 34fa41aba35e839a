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

#ifndef RNR_NGRAM_HPP_
#define RNR_NGRAM_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rnr {

inline constexpr const char* kSentStart = "<s>";
inline constexpr const char* kSentEnd = "</s>";
inline constexpr const char* kUnk = "<unk>";

// Interpolated Kneser-Ney n-gram model. Probabilities and backoff weights
// are log10, ARPA-style: an explicit entry stores the full interpolated
// probability, unseen n-grams back off through the history's weight.
class NGramModel {
 public:
  struct Entry {
    double logprob = 0.0;                 // log10 p(w | history)
    std::optional<double> backoff;        // log10 backoff weight of this gram as a history
  };

  // Sentences are whitespace-tokenized word strings (no <s>/</s>).
  static NGramModel Train(const std::vector<std::string>& corpus, int order,
                          std::optional<double> discount = std::nullopt);

  // log10 p(w | context); OOV words are mapped to <unk>.
  double ScoreWord(const std::vector<std::string>& context, const std::string& word) const;

  // Total log10 probability including </s>; context padded with <s>.
  double ScoreSentence(const std::string& sentence) const;

  struct PplResult {
    double perplexity = 0.0;
    std::size_t tokens = 0;   // includes one </s> per sentence
    std::size_t oov = 0;
    double total_log10 = 0.0;
  };
  PplResult Perplexity(const std::vector<std::string>& corpus) const;

  void ExportArpa(const std::string& path) const;
  static NGramModel ImportArpa(const std::string& path);

  int Order() const { return order_; }
  // Predicted vocabulary: every unigram except <s>.
  std::vector<std::string> Vocabulary() const;
  const std::vector<double>& Discounts() const { return discounts_; }

  // Grams of order k (1-based), in table order.
  const std::map<std::vector<std::string>, Entry>& Grams(int k) const { return tables_[k - 1]; }

 private:
  explicit NGramModel(int order) : order_(order), tables_(order) {}

  int order_;
  std::vector<std::map<std::vector<std::string>, Entry>> tables_;  // [k-1] -> k-gram table
  std::vector<double> discounts_;  // per order; empty for imported models
};

std::vector<std::string> SplitWords(const std::string& line);

}  // namespace rnr

#endif  // RNR_NGRAM_HPP_
