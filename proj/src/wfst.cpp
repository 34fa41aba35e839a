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

#include "rnr/wfst.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace rnr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kEps = SymbolTable::kEpsilon;
}  // namespace

void Wfst::SortArcs() {
  for (auto& state_arcs : arcs_) {
    std::sort(state_arcs.begin(), state_arcs.end(), [](const Arc& a, const Arc& b) {
      return std::tie(a.ilabel, a.olabel, a.weight, a.next) <
             std::tie(b.ilabel, b.olabel, b.weight, b.next);
    });
  }
}

std::size_t Wfst::NumArcs() const {
  std::size_t n = 0;
  for (const auto& a : arcs_) n += a.size();
  return n;
}

Wfst MakeLinearAcceptor(const std::vector<std::string>& seq, const SymbolTablePtr& syms) {
  Wfst f(syms, syms);
  int s = f.AddState();
  f.SetStart(s);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int id = syms->Find(seq[i]);
    if (id < 0) {
      throw std::runtime_error("make_linear_acceptor: unknown symbol '" + seq[i] +
                               "' at position " + std::to_string(i));
    }
    int next = f.AddState();
    f.AddArc(s, Arc{id, id, 0.0, next});
    s = next;
  }
  f.SetFinal(s, 0.0);
  f.SortArcs();
  return f;
}

Wfst Compose(const Wfst& a, const Wfst& b) {
  if (!(*a.OutputSymbols() == *b.InputSymbols())) {
    throw std::runtime_error("compose: output/input symbol tables do not match");
  }
  Wfst c(a.InputSymbols(), b.OutputSymbols());
  if (a.Start() < 0 || b.Start() < 0) {
    c.SetStart(c.AddState());
    return c;
  }

  // Epsilon-sequencing filter: state 0 allows any move, 1 commits to
  // B-only epsilon moves, 2 commits to A-only epsilon moves.
  struct Key {
    int s1, s2, f;
    bool operator==(const Key& o) const { return s1 == o.s1 && s2 == o.s2 && f == o.f; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<long long>()(((long long)k.s1 << 22) ^ ((long long)k.s2 << 2) ^ k.f);
    }
  };
  std::unordered_map<Key, int, KeyHash> ids;
  std::deque<Key> queue;
  auto state_of = [&](Key k) {
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    int s = c.AddState();
    ids.emplace(k, s);
    queue.push_back(k);
    double fw = a.FinalWeight(k.s1) + b.FinalWeight(k.s2);
    if (fw != kInf) c.SetFinal(s, fw);
    return s;
  };

  c.SetStart(state_of(Key{a.Start(), b.Start(), 0}));
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    int src = ids[k];
    const auto& arcs1 = a.Arcs(k.s1);
    const auto& arcs2 = b.Arcs(k.s2);
    for (const Arc& a1 : arcs1) {
      if (a1.olabel == kEps) {
        // A moves alone.
        if (k.f == 0 || k.f == 2) {
          c.AddArc(src, Arc{a1.ilabel, kEps, a1.weight, state_of(Key{a1.next, k.s2, 2})});
        }
        // Both move on a matched epsilon.
        if (k.f == 0) {
          for (const Arc& a2 : arcs2) {
            if (a2.ilabel != kEps) break;  // arcs sorted by ilabel
            c.AddArc(src, Arc{a1.ilabel, a2.olabel, a1.weight + a2.weight,
                              state_of(Key{a1.next, a2.next, 0})});
          }
        }
      } else {
        // Matched non-epsilon labels reset the filter.
        auto lo = std::lower_bound(arcs2.begin(), arcs2.end(), a1.olabel,
                                   [](const Arc& x, int l) { return x.ilabel < l; });
        for (auto it = lo; it != arcs2.end() && it->ilabel == a1.olabel; ++it) {
          c.AddArc(src, Arc{a1.ilabel, it->olabel, a1.weight + it->weight,
                            state_of(Key{a1.next, it->next, 0})});
        }
      }
    }
    if (k.f == 0 || k.f == 1) {
      // B moves alone.
      for (const Arc& a2 : arcs2) {
        if (a2.ilabel != kEps) break;
        c.AddArc(src, Arc{kEps, a2.olabel, a2.weight, state_of(Key{k.s1, a2.next, 1})});
      }
    }
  }
  c.SortArcs();
  return c;
}

Wfst Trim(const Wfst& f) {
  int n = f.NumStates();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  if (f.Start() >= 0) {
    std::deque<int> q{f.Start()};
    fwd[f.Start()] = 1;
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      for (const Arc& a : f.Arcs(s))
        if (!fwd[a.next]) {
          fwd[a.next] = 1;
          q.push_back(a.next);
        }
    }
  }
  std::vector<std::vector<int>> rev(n);
  for (int s = 0; s < n; ++s)
    for (const Arc& a : f.Arcs(s)) rev[a.next].push_back(s);
  std::deque<int> q;
  for (const auto& [s, w] : f.Finals()) {
    bwd[s] = 1;
    q.push_back(s);
  }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int p : rev[s])
      if (!bwd[p]) {
        bwd[p] = 1;
        q.push_back(p);
      }
  }

  Wfst out(f.InputSymbols(), f.OutputSymbols());
  std::vector<int> remap(n, -1);
  for (int s = 0; s < n; ++s)
    if (fwd[s] && bwd[s]) remap[s] = out.AddState();
  if (f.Start() < 0 || remap[f.Start()] < 0) {
    // Empty language: keep a bare start state.
    Wfst empty(f.InputSymbols(), f.OutputSymbols());
    empty.SetStart(empty.AddState());
    return empty;
  }
  out.SetStart(remap[f.Start()]);
  for (int s = 0; s < n; ++s) {
    if (remap[s] < 0) continue;
    for (const Arc& a : f.Arcs(s))
      if (remap[a.next] >= 0) out.AddArc(remap[s], Arc{a.ilabel, a.olabel, a.weight, remap[a.next]});
  }
  for (const auto& [s, w] : f.Finals())
    if (remap[s] >= 0) out.SetFinal(remap[s], w);
  out.SortArcs();
  return out;
}

namespace {

// Minimum cost from each state to an accepting stop, final weights included.
std::vector<double> BackwardDistances(const Wfst& f) {
  int n = f.NumStates();
  std::vector<std::vector<Arc>> rev(n);
  for (int s = 0; s < n; ++s) {
    for (const Arc& a : f.Arcs(s)) {
      if (a.weight < 0)
        throw std::runtime_error("shortest_path: negative arc weight " + std::to_string(a.weight));
      rev[a.next].push_back(Arc{a.ilabel, a.olabel, a.weight, s});
    }
  }
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (const auto& [s, w] : f.Finals()) {
    if (w < 0) throw std::runtime_error("shortest_path: negative final weight");
    if (w < dist[s]) {
      dist[s] = w;
      pq.push({w, s});
    }
  }
  while (!pq.empty()) {
    auto [d, s] = pq.top();
    pq.pop();
    if (d > dist[s]) continue;
    for (const Arc& a : rev[s]) {
      double nd = d + a.weight;
      if (nd < dist[a.next]) {
        dist[a.next] = nd;
        pq.push({nd, a.next});
      }
    }
  }
  return dist;
}

struct PathItem {
  double g = 0.0;
  std::vector<int> olabels;
  std::vector<int> ilabels;
  int state = 0;
  std::vector<int> eps_seen;  // states visited since the last label emission
};

struct PathItemCompare {
  const std::vector<double>* dist;
  // std::priority_queue is a max-heap; return true when a is worse than b.
  bool operator()(const PathItem& a, const PathItem& b) const {
    double fa = a.g + (*dist)[a.state];
    double fb = b.g + (*dist)[b.state];
    if (fa != fb) return fa > fb;
    if (a.olabels != b.olabels) return a.olabels > b.olabels;
    if (a.ilabels != b.ilabels) return a.ilabels > b.ilabels;
    return a.state > b.state;
  }
};

}  // namespace

ShortestPathResult ShortestPath(const Wfst& f) {
  ShortestPathResult res;
  if (f.Start() < 0) {
    res.empty_language = true;
    return res;
  }
  std::vector<double> dist = BackwardDistances(f);
  double best = dist[f.Start()];
  if (best == kInf) {
    res.empty_language = true;
    return res;
  }
  double tol = 1e-9 * (1.0 + std::abs(best));

  std::priority_queue<PathItem, std::vector<PathItem>, PathItemCompare> pq{PathItemCompare{&dist}};
  pq.push(PathItem{0.0, {}, {}, f.Start(), {f.Start()}});
  std::size_t expansions = 0;
  while (!pq.empty()) {
    PathItem it = pq.top();
    pq.pop();
    if (++expansions > 5000000)
      throw std::runtime_error("shortest_path: optimal-path tie exploration exceeded budget");
    double fw = f.FinalWeight(it.state);
    if (it.g + fw <= best + tol) {
      res.cost = it.g + fw;
      res.ilabels = std::move(it.ilabels);
      res.olabels = std::move(it.olabels);
      return res;
    }
    for (const Arc& a : f.Arcs(it.state)) {
      if (it.g + a.weight + dist[a.next] > best + tol) continue;
      PathItem nx;
      nx.g = it.g + a.weight;
      nx.state = a.next;
      nx.olabels = it.olabels;
      nx.ilabels = it.ilabels;
      if (a.olabel != kEps) nx.olabels.push_back(a.olabel);
      if (a.ilabel != kEps) nx.ilabels.push_back(a.ilabel);
      if (a.ilabel == kEps && a.olabel == kEps && a.weight == 0.0) {
        // Block zero-cost epsilon cycles.
        if (std::find(it.eps_seen.begin(), it.eps_seen.end(), a.next) != it.eps_seen.end())
          continue;
        nx.eps_seen = it.eps_seen;
        nx.eps_seen.push_back(a.next);
      } else {
        nx.eps_seen = {a.next};
      }
      pq.push(std::move(nx));
    }
  }
  res.empty_language = true;  // unreachable when dist[start] finite
  return res;
}

std::vector<std::string> ShortestPathResult::InputStrings(const Wfst& f) const {
  std::vector<std::string> out;
  out.reserve(ilabels.size());
  for (int l : ilabels) out.push_back(f.InputSymbols()->Symbol(l));
  return out;
}

std::vector<std::string> ShortestPathResult::OutputStrings(const Wfst& f) const {
  std::vector<std::string> out;
  out.reserve(olabels.size());
  for (int l : olabels) out.push_back(f.OutputSymbols()->Symbol(l));
  return out;
}

void WriteFstText(const Wfst& f, std::ostream& os) {
  os << "start " << f.Start() << "\n";
  os.precision(17);
  for (int s = 0; s < f.NumStates(); ++s) {
    for (const Arc& a : f.Arcs(s)) {
      os << s << " " << a.next << " " << f.InputSymbols()->Symbol(a.ilabel) << " "
         << f.OutputSymbols()->Symbol(a.olabel) << " " << a.weight << "\n";
    }
  }
  for (const auto& [s, w] : f.Finals()) os << s << " " << w << "\n";
}

Wfst ReadFstText(std::istream& is) {
  auto isyms = std::make_shared<SymbolTable>();
  auto osyms = std::make_shared<SymbolTable>();
  struct RawArc {
    int src, dst;
    std::string isym, osym;
    double weight;
  };
  std::vector<RawArc> arcs;
  std::vector<std::pair<int, double>> finals;
  int start = -1;
  int max_state = -1;

  std::string line;
  int lineno = 0;
  bool have_start = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (!have_start) {
        if (tok.size() != 2 || tok[0] != "start") throw std::invalid_argument("expected start line");
        start = std::stoi(tok[1]);
        max_state = std::max(max_state, start);
        have_start = true;
      } else if (tok.size() == 5) {
        RawArc a{std::stoi(tok[0]), std::stoi(tok[1]), tok[2], tok[3], std::stod(tok[4])};
        max_state = std::max({max_state, a.src, a.dst});
        arcs.push_back(std::move(a));
      } else if (tok.size() == 2) {
        int s = std::stoi(tok[0]);
        max_state = std::max(max_state, s);
        finals.emplace_back(s, std::stod(tok[1]));
      } else {
        throw std::invalid_argument("expected arc or final line");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("fst text: malformed line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_start) throw std::runtime_error("fst text: missing start line");

  // Intern symbols in order of appearance; <eps> keeps id 0.
  auto isyms_mut = std::make_shared<SymbolTable>();
  auto osyms_mut = std::make_shared<SymbolTable>();
  for (const auto& a : arcs) {
    isyms_mut->AddSymbol(a.isym);
    osyms_mut->AddSymbol(a.osym);
  }
  Wfst f(isyms_mut, osyms_mut);
  for (int s = 0; s <= max_state; ++s) f.AddState();
  f.SetStart(start);
  for (const auto& a : arcs)
    f.AddArc(a.src, Arc{isyms_mut->Find(a.isym), osyms_mut->Find(a.osym), a.weight, a.dst});
  for (const auto& [s, w] : finals) f.SetFinal(s, w);
  f.SortArcs();
  return f;
}

}  // namespace rnr
