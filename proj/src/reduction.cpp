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

#include "rnr/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rnr {

namespace {

std::size_t Utf8Len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;  // malformed; treat as a single byte
}

bool IsPassThrough(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && (std::isspace(u) || std::isdigit(u));
}

}  // namespace

std::vector<std::string> Utf8Codepoints(const std::string& s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t len = std::min(Utf8Len(static_cast<unsigned char>(s[i])), s.size() - i);
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

ReductionMap::ReductionMap(std::string name,
                           std::vector<std::pair<std::string, std::string>> pairs)
    : name_(std::move(name)) {
  if (pairs.empty()) throw std::runtime_error("reduction map '" + name_ + "': empty mapping");
  std::set<std::string> seen_reduced;
  for (auto& [orig, red] : pairs) {
    if (orig.empty() || red.empty())
      throw std::runtime_error("reduction map '" + name_ + "': empty grapheme field");
    if (map_.count(orig))
      throw std::runtime_error("reduction map '" + name_ + "': duplicate original grapheme '" +
                               orig + "'");
    map_.emplace(orig, red);
    original_.push_back(orig);
    if (seen_reduced.insert(red).second) reduced_.push_back(red);
    max_grapheme_bytes_ = std::max(max_grapheme_bytes_, orig.size());
  }
  for (const std::string& red : reduced_) {
    auto it = map_.find(red);
    if (it == map_.end()) continue;
    if (it->second != red)
      throw std::runtime_error("reduction map '" + name_ + "': reduced grapheme '" + red +
                               "' is itself mapped to '" + it->second + "' (ambiguous alphabet)");
  }
}

ReductionMap ReductionMap::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("reduction map: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("reduction map " + path + ": line " + std::to_string(lineno) +
                               ": expected `original<TAB>reduced`");
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  // Name the map after the file stem.
  std::string name = path;
  auto slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  auto dot = name.rfind('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return ReductionMap(name, std::move(pairs));
}

void ReductionMap::Write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("reduction map: cannot write " + path);
  out << "# " << name_ << ": " << original_.size() << " -> " << reduced_.size() << "\n";
  for (const std::string& g : original_) out << g << "\t" << map_.at(g) << "\n";
}

ReductionMap ReductionMap::Identity(const std::vector<std::string>& alphabet) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& g : alphabet) pairs.emplace_back(g, g);
  return ReductionMap("identity", std::move(pairs));
}

ReductionMap ReductionMap::Random(const std::vector<std::string>& alphabet, int target_size,
                                  std::uint64_t seed) {
  int n = static_cast<int>(alphabet.size());
  if (target_size < 1 || target_size > n)
    throw std::runtime_error("random reduction: target size " + std::to_string(target_size) +
                             " out of range [1, " + std::to_string(n) + "]");
  std::mt19937_64 rng(seed);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  // First target_size shuffled graphemes seed the classes, so each class is
  // non-empty; the rest join a uniformly random class.
  std::vector<int> class_of(n, -1);
  for (int c = 0; c < target_size; ++c) class_of[order[c]] = c;
  std::uniform_int_distribution<int> pick(0, target_size - 1);
  for (int i = target_size; i < n; ++i) class_of[order[i]] = pick(rng);

  std::vector<std::string> rep(target_size);
  for (int c = 0; c < target_size; ++c) rep[c] = alphabet[order[c]];
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(alphabet[i], rep[class_of[i]]);
  return ReductionMap("rand" + std::to_string(seed), std::move(pairs));
}

const std::string& ReductionMap::MapGrapheme(const std::string& g) const {
  auto it = map_.find(g);
  if (it == map_.end())
    throw std::runtime_error("reduction map '" + name_ + "': unknown grapheme '" + g + "'");
  return it->second;
}

std::vector<std::string> ReductionMap::SplitGraphemes(const std::string& word) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < word.size();) {
    std::size_t take = 0;
    std::size_t limit = std::min(max_grapheme_bytes_, word.size() - i);
    for (std::size_t len = limit; len >= 1; --len) {
      if (map_.count(word.substr(i, len))) {
        take = len;
        break;
      }
    }
    if (take == 0) take = std::min(Utf8Len(static_cast<unsigned char>(word[i])), word.size() - i);
    out.push_back(word.substr(i, take));
    i += take;
  }
  return out;
}

std::string ReductionMap::Apply(const std::string& text, bool permissive,
                                std::size_t* unknown_count) const {
  std::string out;
  out.reserve(text.size());
  int lineno = 1;
  int word_in_line = 1;
  bool in_word = false;
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (IsPassThrough(c)) {
      if (c == '\n') {
        ++lineno;
        word_in_line = 1;
        in_word = false;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (in_word) ++word_in_line;
        in_word = false;
      }
      out.push_back(c);
      ++i;
      continue;
    }
    in_word = true;
    std::size_t take = 0;
    std::size_t limit = std::min(max_grapheme_bytes_, text.size() - i);
    for (std::size_t len = limit; len >= 1; --len) {
      auto it = map_.find(text.substr(i, len));
      if (it != map_.end()) {
        out += it->second;
        take = len;
        break;
      }
    }
    if (take == 0) {
      std::size_t len = std::min(Utf8Len(static_cast<unsigned char>(text[i])), text.size() - i);
      std::string g = text.substr(i, len);
      if (!permissive)
        throw std::runtime_error("reduction map '" + name_ + "': unknown grapheme '" + g +
                                 "' in word " + std::to_string(word_in_line) + ", line " +
                                 std::to_string(lineno));
      if (unknown_count) ++*unknown_count;
      out += g;
      take = len;
    }
    i += take;
  }
  return out;
}

}  // namespace rnr
