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

#include "rnr/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rnr/builders.hpp"
#include "rnr/ngram.hpp"

namespace rnr {

AlignmentReport Align(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      int diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      int ins = cost[i][j - 1] + 1;
      int del = cost[i - 1][j] + 1;
      cost[i][j] = std::min({diag, ins, del});
    }
  }

  AlignmentReport rep;
  rep.ref_length = n;
  std::vector<AlignedPair> rev;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    // Ties prefer substitution/match, then insertion, then deletion.
    if (i > 0 && j > 0 &&
        cost[i][j] == cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      bool match = ref[i - 1] == hyp[j - 1];
      rev.push_back({ref[i - 1], hyp[j - 1], match ? EditTag::kCorrect : EditTag::kSubstitution});
      --i;
      --j;
    } else if (j > 0 && cost[i][j] == cost[i][j - 1] + 1) {
      rev.push_back({"", hyp[j - 1], EditTag::kInsertion});
      --j;
    } else {
      rev.push_back({ref[i - 1], "", EditTag::kDeletion});
      --i;
    }
  }
  rep.pairs.assign(rev.rbegin(), rev.rend());
  for (const auto& p : rep.pairs) {
    switch (p.tag) {
      case EditTag::kCorrect: ++rep.matches; break;
      case EditTag::kSubstitution: ++rep.substitutions; break;
      case EditTag::kInsertion: ++rep.insertions; break;
      case EditTag::kDeletion: ++rep.deletions; break;
    }
  }
  return rep;
}

WerResult Wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  WerResult r;
  r.report = Align(ref, hyp);
  if (r.report.ref_length == 0) {
    if (r.report.Edits() == 0) {
      r.rate = 0.0;
    } else {
      r.undefined = true;
      r.rate = std::numeric_limits<double>::infinity();
    }
    return r;
  }
  r.rate = double(r.report.Edits()) / double(r.report.ref_length);
  return r;
}

WerResult CorpusWer(const std::vector<std::string>& ref_lines,
                    const std::vector<std::string>& hyp_lines) {
  if (ref_lines.size() != hyp_lines.size())
    throw std::runtime_error("wer: reference has " + std::to_string(ref_lines.size()) +
                             " lines but hypothesis has " + std::to_string(hyp_lines.size()));
  WerResult r;
  for (std::size_t i = 0; i < ref_lines.size(); ++i) {
    AlignmentReport a = Align(SplitWords(ref_lines[i]), SplitWords(hyp_lines[i]));
    r.report.substitutions += a.substitutions;
    r.report.insertions += a.insertions;
    r.report.deletions += a.deletions;
    r.report.matches += a.matches;
    r.report.ref_length += a.ref_length;
  }
  if (r.report.ref_length == 0) {
    r.undefined = r.report.Edits() > 0;
    r.rate = r.undefined ? std::numeric_limits<double>::infinity() : 0.0;
    return r;
  }
  r.rate = double(r.report.Edits()) / double(r.report.ref_length);
  return r;
}

WerResult RWer(const ReductionMap& m, const std::vector<std::string>& ref_lines,
               const std::vector<std::string>& hyp_lines) {
  std::vector<std::string> rr, rh;
  rr.reserve(ref_lines.size());
  rh.reserve(hyp_lines.size());
  for (const auto& l : ref_lines) rr.push_back(m.Apply(l, /*permissive=*/true));
  for (const auto& l : hyp_lines) rh.push_back(m.Apply(l, /*permissive=*/true));
  return CorpusWer(rr, rh);
}

std::vector<std::string> GraphemeTokens(const ReductionMap& m, const std::string& line) {
  std::vector<std::string> out;
  for (const std::string& w : SplitWords(line)) {
    if (!out.empty()) out.push_back(kSeparator);
    for (auto& g : m.SplitGraphemes(w)) out.push_back(std::move(g));
  }
  return out;
}

SubCorrectionResult SubstitutionCorrectionPct(const std::vector<std::string>& ref_lines,
                                              const std::vector<std::string>& identity_hyp_lines,
                                              const ReductionMap& m,
                                              const std::vector<std::string>& reduced_hyp_lines) {
  if (ref_lines.size() != identity_hyp_lines.size() ||
      ref_lines.size() != reduced_hyp_lines.size())
    throw std::runtime_error("substitution correction: line counts differ");
  SubCorrectionResult res;
  for (std::size_t i = 0; i < ref_lines.size(); ++i) {
    std::vector<std::string> ref_toks = GraphemeTokens(m, ref_lines[i]);
    std::vector<std::string> red_ref_toks = GraphemeTokens(m, m.Apply(ref_lines[i], true));
    if (ref_toks.size() != red_ref_toks.size())
      throw std::logic_error("substitution correction: reduction changed grapheme count");

    AlignmentReport a1 = Align(ref_toks, GraphemeTokens(m, identity_hyp_lines[i]));
    AlignmentReport a2 = Align(red_ref_toks, GraphemeTokens(m, reduced_hyp_lines[i]));

    // Tag of each reference-side grapheme position in a2.
    std::vector<EditTag> a2_tag(ref_toks.size(), EditTag::kDeletion);
    std::size_t k = 0;
    for (const auto& p : a2.pairs) {
      if (p.tag == EditTag::kInsertion) continue;
      a2_tag.at(k++) = p.tag;
    }
    if (k != red_ref_toks.size())
      throw std::logic_error("substitution correction: alignment bookkeeping mismatch");

    k = 0;
    for (const auto& p : a1.pairs) {
      if (p.tag == EditTag::kInsertion) continue;
      if (p.tag == EditTag::kSubstitution) {
        ++res.x;
        if (a2_tag[k] == EditTag::kCorrect) ++res.y;
      }
      ++k;
    }
  }
  if (res.x == 0) {
    res.no_substitutions = true;
    res.pct = 0.0;
  } else {
    res.pct = 100.0 * double(res.y) / double(res.x);
  }
  return res;
}

std::string RenderReport(std::vector<ReportRow> rows, bool tsv) {
  std::sort(rows.begin(), rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return a.system < b.system; });
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  if (tsv) {
    os << "system\twer\trwer\tppl\n";
    for (const auto& r : rows)
      os << r.system << "\t" << 100.0 * r.wer << "\t" << 100.0 * r.rwer << "\t" << r.ppl << "\n";
    return os.str();
  }
  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.system.size() + 2);
  os << std::left << std::setw(int(width)) << "System" << std::right << std::setw(8) << "WER%"
     << std::setw(8) << "rWER%" << std::setw(10) << "ppl" << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(int(width)) << r.system << std::right << std::setw(8)
       << 100.0 * r.wer << std::setw(8) << 100.0 * r.rwer << std::setw(10) << r.ppl << "\n";
  }
  return os.str();
}

}  // namespace rnr
