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

#ifndef RNR_SYMBOL_TABLE_HPP_
#define RNR_SYMBOL_TABLE_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace rnr {

// Bijection between UTF-8 symbol strings and dense integer labels.
// Id 0 is always the epsilon symbol, spelled "<eps>".
class SymbolTable {
 public:
  static constexpr int kEpsilon = 0;
  static constexpr const char* kEpsilonSym = "<eps>";

  SymbolTable() { AddSymbol(kEpsilonSym); }

  int AddSymbol(const std::string& sym) {
    auto it = sym_to_id_.find(sym);
    if (it != sym_to_id_.end()) return it->second;
    int id = static_cast<int>(id_to_sym_.size());
    id_to_sym_.push_back(sym);
    sym_to_id_.emplace(sym, id);
    return id;
  }

  // -1 if absent.
  int Find(const std::string& sym) const {
    auto it = sym_to_id_.find(sym);
    return it == sym_to_id_.end() ? -1 : it->second;
  }

  int FindOrThrow(const std::string& sym) const {
    int id = Find(sym);
    if (id < 0) throw std::runtime_error("symbol table: unknown symbol '" + sym + "'");
    return id;
  }

  const std::string& Symbol(int id) const {
    if (id < 0 || id >= static_cast<int>(id_to_sym_.size()))
      throw std::runtime_error("symbol table: id out of range: " + std::to_string(id));
    return id_to_sym_[id];
  }

  bool Contains(const std::string& sym) const { return Find(sym) >= 0; }
  int Size() const { return static_cast<int>(id_to_sym_.size()); }

  const std::vector<std::string>& Symbols() const { return id_to_sym_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.id_to_sym_ == b.id_to_sym_;
  }

 private:
  std::vector<std::string> id_to_sym_;
  std::unordered_map<std::string, int> sym_to_id_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

}  // namespace rnr

#endif  // RNR_SYMBOL_TABLE_HPP_
