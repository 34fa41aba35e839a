#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rnr/eval.hpp"
#include "test_util.hpp"

using namespace rnr;
using namespace rnr_test;

namespace {

const std::string kData = RNR_DATA_DIR;

std::vector<std::string> Toks(const std::string& s) {
  std::vector<std::string> out;
  for (char c : s)
    if (c != ' ') out.emplace_back(1, c);
  return out;
}

}  // namespace

TEST_CASE("alignment: classic substitution") {
  auto rep = Align({"a", "b", "c"}, {"a", "x", "c"});
  CHECK(rep.substitutions == 1);
  CHECK(rep.insertions == 0);
  CHECK(rep.deletions == 0);
  CHECK(rep.matches == 2);
  CHECK(rep.ref_length == 3);
  REQUIRE(rep.pairs.size() == 3);
  CHECK(rep.pairs[1].tag == EditTag::kSubstitution);
  CHECK(rep.pairs[1].ref == "b");
  CHECK(rep.pairs[1].hyp == "x");
}

TEST_CASE("alignment: ties resolve to substitutions before insert+delete") {
  auto rep = Align({"a", "b"}, {"b", "a"});
  CHECK(rep.Edits() == 2);
  CHECK(rep.substitutions == 2);
  CHECK(rep.insertions == 0);
  CHECK(rep.deletions == 0);
}

TEST_CASE("alignment: pure insertions and deletions") {
  auto ins = Align({}, {"a", "b"});
  CHECK(ins.insertions == 2);
  CHECK(ins.ref_length == 0);
  auto del = Align({"a", "b"}, {});
  CHECK(del.deletions == 2);
}

TEST_CASE("word error rate edge cases") {
  CHECK(Wer({}, {}).rate == doctest::Approx(0.0));
  CHECK(!Wer({}, {}).undefined);
  auto r = Wer({}, {"a"});
  CHECK(r.undefined);
  CHECK(std::isinf(r.rate));
  auto s = Wer({"a", "b", "c", "d"}, {"a", "x", "c"});
  CHECK(s.rate == doctest::Approx(2.0 / 4.0));  // one substitution, one deletion
}

TEST_CASE("alignment edit count equals the independent distance oracle") {
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> len(0, 8), sym(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> a, b;
    int n = len(rng), m = len(rng);
    for (int i = 0; i < n; ++i) a.emplace_back(1, char('a' + sym(rng)));
    for (int i = 0; i < m; ++i) b.emplace_back(1, char('a' + sym(rng)));
    CHECK(int(Align(a, b).Edits()) == Lev(a, b));
  }
}

TEST_CASE("corpus-level rate pools edits and reference lengths") {
  auto r = CorpusWer({"a b c", "d e"}, {"a x c", "d e f"});
  // Line 1: one substitution over 3; line 2: one insertion over 2.
  CHECK(r.report.substitutions == 1);
  CHECK(r.report.insertions == 1);
  CHECK(r.report.ref_length == 5);
  CHECK(r.rate == doctest::Approx(2.0 / 5.0));
  CHECK_THROWS_AS(CorpusWer({"a"}, {"a", "b"}), std::runtime_error);
}

TEST_CASE("reduced-alphabet rate forgives class-internal confusions") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::vector<std::string> ref{"the game is on"};
  std::vector<std::string> hyp{"the came is on"};
  CHECK(CorpusWer(ref, hyp).rate == doctest::Approx(1.0 / 4.0));
  CHECK(RWer(rho, ref, hyp).rate == doctest::Approx(0.0));
  // But not cross-class confusions.
  std::vector<std::string> hyp2{"the lame is on"};
  CHECK(RWer(rho, ref, hyp2).rate == doctest::Approx(1.0 / 4.0));
  // With the identity map the two rates coincide.
  ReductionMap ident = ReductionMap::Identity(rho.OriginalAlphabet());
  CHECK(RWer(ident, ref, hyp).rate == doctest::Approx(CorpusWer(ref, hyp).rate));
}

TEST_CASE("reduction never increases grapheme edit distance") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::mt19937 rng(808);
  std::string alpha = "abcdeghiklmnorstu";
  std::uniform_int_distribution<int> len(1, 6), sym(0, int(alpha.size()) - 1),
      words(1, 3);
  auto random_line = [&]() {
    std::string line;
    int w = words(rng);
    for (int i = 0; i < w; ++i) {
      if (i) line += ' ';
      int n = len(rng);
      for (int j = 0; j < n; ++j) line += alpha[sym(rng)];
    }
    return line;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::string x = random_line(), y = random_line();
    int before = Lev(GraphemeTokens(rho, x), GraphemeTokens(rho, y));
    int after = Lev(GraphemeTokens(rho, rho.Apply(x)), GraphemeTokens(rho, rho.Apply(y)));
    CHECK(after <= before);
  }
}

TEST_CASE("substitution correction: a class-internal error is fully corrected") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  // Identity system confuses the velar stop; the reduced system, working in
  // the reduced alphabet, gets the whole line right.
  auto r = SubstitutionCorrectionPct({"kite"}, {"gite"}, rho, {rho.Apply("kite")});
  CHECK(r.x == 1);
  CHECK(r.y == 1);
  CHECK(r.pct == doctest::Approx(100.0));
  CHECK(!r.no_substitutions);
}

TEST_CASE("substitution correction: only corrected positions count") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  // Two identity substitutions across two lines; the reduced system fixes
  // one line and garbles the same position in the other.
  auto r = SubstitutionCorrectionPct({"kite", "kite"}, {"gite", "gite"}, rho,
                                     {rho.Apply("kite"), "sata"});
  CHECK(r.x == 2);
  CHECK(r.y == 1);
  CHECK(r.pct == doctest::Approx(50.0));
}

TEST_CASE("substitution correction: deletions and insertions are not substitutions") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  auto r = SubstitutionCorrectionPct({"kite"}, {"kit"}, rho, {rho.Apply("kite")});
  CHECK(r.no_substitutions);
  CHECK(r.x == 0);
  auto r2 = SubstitutionCorrectionPct({"kite"}, {"kite"}, rho, {rho.Apply("kite")});
  CHECK(r2.no_substitutions);
}

TEST_CASE("substitution correction input validation") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  CHECK_THROWS_AS(SubstitutionCorrectionPct({"a", "b"}, {"a"}, rho, {"a", "b"}),
                  std::runtime_error);
}

TEST_CASE("report rendering: sorted rows, fixed decimals, tsv twin") {
  std::vector<ReportRow> rows{{"zeta d=3", 0.125, 0.1, 42.5}, {"base d=0", 0.25, 0.25, 37.0}};
  std::string text = RenderReport(rows);
  // Sorted by system name: base before zeta.
  CHECK(text.find("base d=0") < text.find("zeta d=3"));
  CHECK(text.find("WER%") != std::string::npos);
  CHECK(text.find("12.50") != std::string::npos);
  CHECK(text.find("25.00") != std::string::npos);
  std::string tsv = RenderReport(rows, /*tsv=*/true);
  CHECK(tsv.rfind("system\twer\trwer\tppl\n", 0) == 0);
  CHECK(tsv.find("base d=0\t25.00\t25.00\t37.00\n") != std::string::npos);
  CHECK(tsv.find("zeta d=3\t12.50\t10.00\t42.50\n") != std::string::npos);
}

TEST_CASE("grapheme tokenization inserts separators between words") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  auto toks = GraphemeTokens(rho, "at on");
  CHECK(toks == std::vector<std::string>{"a", "t", "▁", "o", "n"});
  CHECK(GraphemeTokens(rho, "").empty());
  CHECK(Toks("a b") == std::vector<std::string>{"a", "b"});  // helper sanity
}
