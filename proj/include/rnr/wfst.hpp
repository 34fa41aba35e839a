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

#ifndef RNR_WFST_HPP_
#define RNR_WFST_HPP_

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rnr/symbol_table.hpp"

namespace rnr {

// Tropical semiring weight: plus = min, times = +, zero = inf, one = 0.
struct Weight {
  double value = 0.0;

  static Weight Zero() { return {std::numeric_limits<double>::infinity()}; }
  static Weight One() { return {0.0}; }
  bool IsZero() const { return value == std::numeric_limits<double>::infinity(); }

  friend Weight Plus(Weight a, Weight b) { return {a.value < b.value ? a.value : b.value}; }
  friend Weight Times(Weight a, Weight b) { return {a.value + b.value}; }
  friend bool operator==(Weight a, Weight b) { return a.value == b.value; }
};

struct Arc {
  int ilabel = 0;
  int olabel = 0;
  double weight = 0.0;
  int next = 0;
};

// Weighted transducer over the tropical semiring. Immutable once built;
// arcs per state are kept sorted by (ilabel, olabel, next).
class Wfst {
 public:
  Wfst(SymbolTablePtr isyms, SymbolTablePtr osyms)
      : isyms_(std::move(isyms)), osyms_(std::move(osyms)) {}

  int AddState() {
    arcs_.emplace_back();
    return static_cast<int>(arcs_.size()) - 1;
  }

  void SetStart(int s) { start_ = s; }
  void SetFinal(int s, double weight) { finals_[s] = weight; }
  void AddArc(int src, const Arc& arc) { arcs_[src].push_back(arc); }

  // Call once construction is complete; enables merge-style composition.
  void SortArcs();

  int Start() const { return start_; }
  int NumStates() const { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& Arcs(int s) const { return arcs_[s]; }
  const std::map<int, double>& Finals() const { return finals_; }
  bool IsFinal(int s) const { return finals_.count(s) != 0; }
  double FinalWeight(int s) const {
    auto it = finals_.find(s);
    return it == finals_.end() ? std::numeric_limits<double>::infinity() : it->second;
  }

  const SymbolTablePtr& InputSymbols() const { return isyms_; }
  const SymbolTablePtr& OutputSymbols() const { return osyms_; }

  std::size_t NumArcs() const;

 private:
  std::vector<std::vector<Arc>> arcs_;
  std::map<int, double> finals_;
  int start_ = -1;
  SymbolTablePtr isyms_;
  SymbolTablePtr osyms_;
};

// Chain acceptor for a fixed symbol sequence; accepts exactly `seq` at cost 0.
Wfst MakeLinearAcceptor(const std::vector<std::string>& seq, const SymbolTablePtr& syms);

// Composition with the standard three-state epsilon filter. Requires
// a.OutputSymbols() and b.InputSymbols() to hold identical contents.
Wfst Compose(const Wfst& a, const Wfst& b);

// Removes states that are not both accessible and coaccessible.
Wfst Trim(const Wfst& f);

struct ShortestPathResult {
  bool empty_language = false;   // no accepting path
  double cost = 0.0;
  std::vector<int> ilabels;      // epsilon-free
  std::vector<int> olabels;      // epsilon-free
  std::vector<std::string> InputStrings(const Wfst& f) const;
  std::vector<std::string> OutputStrings(const Wfst& f) const;
};

// One minimum-cost accepting path. Weights must be non-negative. Among
// equal-cost paths, returns the one whose epsilon-stripped output label id
// sequence is lexicographically smallest (then smallest input sequence).
ShortestPathResult ShortestPath(const Wfst& f);

// Line-oriented text format: first line `start <id>`, arc lines
// `src dst isym osym weight`, final lines `state weight`. Symbols by string.
void WriteFstText(const Wfst& f, std::ostream& os);
Wfst ReadFstText(std::istream& is);

}  // namespace rnr

#endif  // RNR_WFST_HPP_
