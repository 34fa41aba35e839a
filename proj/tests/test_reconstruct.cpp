#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rnr/reconstruct.hpp"
#include "test_util.hpp"

using namespace rnr;
using namespace rnr_test;

namespace {

const std::string kData = RNR_DATA_DIR;
const std::string kBin = RNR_BINARY_DIR;
const double kLn10 = std::log(10.0);
const double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(bool(in), path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

DictConfig DictFromCorpus(const ReductionMap& m, const std::vector<std::string>& lines,
                          double eta = 100.0) {
  std::set<std::string> words;
  for (const auto& l : lines)
    for (const auto& w : SplitWords(l)) words.insert(w);
  DictConfig dict;
  dict.eta = eta;
  for (const auto& w : words) dict.vocabulary.emplace_back(w, m.SplitGraphemes(w));
  return dict;
}

// Min edits turning some preimage of reduced word `r` into `spelling`:
// a unit-cost alignment where an original grapheme g matches a reduced
// grapheme q exactly when g reduces to q.
int LevAgainstPreimage(const ReductionMap& m, const std::vector<std::string>& r,
                       const std::vector<std::string>& spelling) {
  const std::size_t n = r.size(), k = spelling.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(k + 1));
  for (std::size_t i = 0; i <= n; ++i) dp[i][0] = int(i);
  for (std::size_t j = 0; j <= k; ++j) dp[0][j] = int(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= k; ++j) {
      int sub = m.MapGrapheme(spelling[j - 1]) == r[i - 1] ? 0 : 1;
      dp[i][j] = std::min({dp[i - 1][j - 1] + sub, dp[i][j - 1] + 1, dp[i - 1][j] + 1});
    }
  }
  return dp[n][k];
}

struct OracleResult {
  double cost = kInf;
  std::vector<std::string> words;
};

// Exhaustive reference decoder: every assignment of dictionary words (or the
// unknown token) to hypothesis segments, pricing edits, unknowns and the
// language model independently of any machinery under test.
OracleResult OracleDecode(const std::vector<std::string>& hyp_words, const CascadeAssets& assets) {
  const ReductionMap& m = assets.Mapping();
  const DictConfig& dict = assets.Dict();
  const EditConfig& edit = assets.Edit();

  std::vector<std::vector<std::pair<std::string, double>>> options(hyp_words.size());
  for (std::size_t i = 0; i < hyp_words.size(); ++i) {
    std::vector<std::string> r;
    for (const auto& g : Utf8Codepoints(hyp_words[i])) r.push_back(g);
    for (const auto& [w, spelling] : dict.vocabulary) {
      int dist = LevAgainstPreimage(m, r, spelling);
      if (dist <= edit.d) options[i].emplace_back(w, edit.lambda * dist);
    }
    options[i].emplace_back(kUnk, dict.eta);
  }

  OracleResult best;
  std::vector<std::size_t> choice(hyp_words.size(), 0);
  while (true) {
    double acoustic = 0.0;
    std::string joined;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < choice.size(); ++i) {
      const auto& [w, c] = options[i][choice[i]];
      acoustic += c;
      words.push_back(w);
      joined += (joined.empty() ? "" : " ") + w;
    }
    double total = acoustic - kLn10 * assets.Lm().ScoreSentence(joined);
    if (total < best.cost - 1e-12) {
      best.cost = total;
      best.words = words;
    }
    std::size_t i = 0;
    for (; i < choice.size(); ++i) {
      if (++choice[i] < options[i].size()) break;
      choice[i] = 0;
    }
    if (i == choice.size()) break;
  }
  return best;
}

}  // namespace

TEST_CASE("a reduced spelling snaps back to its dictionary word") {
  ReductionMap zeta = ReductionMap::Load(kData + "/toy_zeta.tsv");
  std::vector<std::string> corpus{"call me now", "call here", "me now"};
  NGramModel lm = NGramModel::Train(corpus, 2);
  CascadeAssets assets(zeta, DictFromCorpus(zeta, corpus), EditConfig{0, 5.0}, lm);

  Reconstruction r = Reconstruct({"1", {"ζall", "me"}}, assets);
  REQUIRE(r.ok);
  CHECK(r.words == std::vector<std::string>{"call", "me"});
  CHECK(r.edit_cost == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.unk_cost == doctest::Approx(0.0));
  CHECK(r.total_cost == doctest::Approx(r.lm_cost).epsilon(1e-9));
}

TEST_CASE("context picks between words that share a reduced form") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::vector<std::string> train = ReadLines(kData + "/toy_train.txt");
  NGramModel lm = NGramModel::Train(train, 4);
  CascadeAssets assets(rho, DictFromCorpus(rho, train), EditConfig{3, 5.0}, lm);

  // "game" and "came" both reduce to "kama"; the surrounding words decide.
  Hypothesis on{"1", SplitWords(rho.Apply("the game is on"))};
  Reconstruction r1 = Reconstruct(on, assets);
  REQUIRE(r1.ok);
  CHECK(r1.words == std::vector<std::string>{"the", "game", "is", "on"});

  Hypothesis came{"2", SplitWords(rho.Apply("the goat came to the lake"))};
  Reconstruction r2 = Reconstruct(came, assets);
  REQUIRE(r2.ok);
  CHECK(r2.words == std::vector<std::string>{"the", "goat", "came", "to", "the", "lake"});
}

TEST_CASE("cost decomposition: edits, unknowns, language model") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::vector<std::string> corpus{"the cat runs", "the dog runs", "a cat sits"};
  NGramModel lm = NGramModel::Train(corpus, 2);
  CascadeAssets assets(rho, DictFromCorpus(rho, corpus), EditConfig{3, 5.0}, lm);

  // Clean hypothesis: zero edit and unknown cost.
  Reconstruction clean = Reconstruct({"1", SplitWords(rho.Apply("the cat runs"))}, assets);
  REQUIRE(clean.ok);
  CHECK(clean.words == std::vector<std::string>{"the", "cat", "runs"});
  CHECK(clean.edit_cost == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(clean.unk_cost == doctest::Approx(0.0));

  // One garbled grapheme: a single edit.
  Reconstruction edited = Reconstruct({"2", {"tha", "kar", "rans"}}, assets);
  REQUIRE(edited.ok);
  CHECK(edited.words == std::vector<std::string>{"the", "cat", "runs"});
  CHECK(edited.edit_cost == doctest::Approx(5.0).epsilon(1e-6));

  // A segment nothing in the dictionary can reach within the budget.
  Reconstruction unk = Reconstruct({"3", {"tha", "mmmmmmmm", "rans"}}, assets);
  REQUIRE(unk.ok);
  CHECK(unk.words[1] == kUnk);
  CHECK(unk.unk_cost == doctest::Approx(100.0));
  CHECK(unk.total_cost ==
        doctest::Approx(unk.edit_cost + unk.unk_cost + unk.lm_cost).epsilon(1e-9));
}

TEST_CASE("decoder agrees with the exhaustive reference decoder") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::vector<std::string> corpus{"the cat runs",  "the dog sits", "a goat eats corn",
                                  "the game is on", "the coat is old", "a cat sees the dog",
                                  "the goat came", "corn is good"};
  NGramModel lm = NGramModel::Train(corpus, 2);
  for (int d : {0, 2}) {
    CascadeAssets assets(rho, DictFromCorpus(rho, corpus), EditConfig{d, 5.0}, lm);
    std::mt19937 rng(99000 + d);
    std::vector<std::string> vocab;
    for (const auto& [w, sp] : assets.Dict().vocabulary) vocab.push_back(w);
    std::uniform_int_distribution<int> nwords(1, 3), pick(0, int(vocab.size()) - 1),
        mutate(0, 3);
    const auto& reduced = rho.ReducedAlphabet();
    std::uniform_int_distribution<int> rsym(0, int(reduced.size()) - 1);

    for (int trial = 0; trial < 30; ++trial) {
      std::vector<std::string> hyp;
      int n = nwords(rng);
      for (int i = 0; i < n; ++i) {
        std::string w = rho.Apply(vocab[pick(rng)]);
        if (mutate(rng) == 0 && !w.empty()) {
          // Corrupt one grapheme inside the reduced alphabet.
          auto gs = Utf8Codepoints(w);
          std::uniform_int_distribution<int> pos(0, int(gs.size()) - 1);
          gs[pos(rng)] = reduced[rsym(rng)];
          w.clear();
          for (const auto& g : gs) w += g;
        }
        hyp.push_back(w);
      }
      OracleResult expect = OracleDecode(hyp, assets);
      Reconstruction got = Reconstruct({"t", hyp}, assets);
      REQUIRE(got.ok);
      CHECK(got.words.size() == hyp.size());
      CHECK_MESSAGE(got.total_cost == doctest::Approx(expect.cost).epsilon(1e-6),
                    "d=", d, " trial ", trial);
    }
  }
}

TEST_CASE("hypothesis line parsing") {
  Hypothesis a = ParseHypothesisLine("utt7\ttha kama is on");
  CHECK(a.id == "utt7");
  CHECK(a.words == std::vector<std::string>{"tha", "kama", "is", "on"});
  Hypothesis b = ParseHypothesisLine("tha kama");
  CHECK(b.id.empty());
  CHECK(b.words == std::vector<std::string>{"tha", "kama"});
  CHECK(ParseHypothesisLine("").words.empty());
}

TEST_CASE("batch decoding is order-preserving and parallelism-invariant") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::vector<std::string> train = ReadLines(kData + "/toy_train.txt");
  NGramModel lm = NGramModel::Train(train, 3);
  CascadeAssets assets(rho, DictFromCorpus(rho, train), EditConfig{3, 5.0}, lm);

  std::vector<std::string> lines;
  for (int i = 0; i < 12; ++i) lines.push_back(rho.Apply(train[i * 7]));
  lines.push_back("");          // empty hypothesis: decodes to nothing or fails benignly
  lines[4] = "xyzÿ";        // graphemes outside every alphabet

  auto serial = ReconstructLines(lines, assets, 1);
  auto parallel = ReconstructLines(lines, assets, 4);
  REQUIRE(serial.size() == lines.size());
  REQUIRE(parallel.size() == lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CHECK(serial[i].id == parallel[i].id);
    CHECK(serial[i].ok == parallel[i].ok);
    CHECK(serial[i].words == parallel[i].words);
    if (serial[i].ok)
      CHECK(serial[i].total_cost == doctest::Approx(parallel[i].total_cost).epsilon(1e-12));
  }
  // The bad line failed without poisoning its neighbours.
  CHECK(!serial[4].ok);
  CHECK(!serial[4].error.empty());
  CHECK(serial[3].ok);
  CHECK(serial[5].ok);
  // Default ids are 1-based line numbers.
  CHECK(serial[0].id == "1");
  CHECK(serial[4].id == "5");
}

TEST_CASE("batch decoding from a file matches in-memory decoding") {
  ReductionMap rho = ReductionMap::Load(kData + "/toy_rho.tsv");
  std::vector<std::string> corpus{"the cat runs", "a dog sits"};
  NGramModel lm = NGramModel::Train(corpus, 2);
  CascadeAssets assets(rho, DictFromCorpus(rho, corpus), EditConfig{3, 5.0}, lm);

  std::string path = kBin + "/hyp_lines.txt";
  {
    std::ofstream out(path);
    out << "u1\t" << rho.Apply("the cat runs") << "\n" << rho.Apply("a dog sits") << "\n";
  }
  auto from_file = ReconstructFile(path, assets);
  auto in_memory =
      ReconstructLines({"u1\t" + rho.Apply("the cat runs"), rho.Apply("a dog sits")}, assets);
  REQUIRE(from_file.size() == 2);
  CHECK(from_file[0].id == "u1");
  CHECK(from_file[0].words == in_memory[0].words);
  CHECK(from_file[1].words == in_memory[1].words);
  CHECK_THROWS_AS(ReconstructFile(kBin + "/nope.txt", assets), std::runtime_error);
}

TEST_CASE("noise channel: zero rates are the identity") {
  std::vector<std::string> alpha{"a", "b", "c"};
  CHECK(SimulateNoise("abc cab\nbca", alpha, 0, 0, 0, 1) == "abc cab\nbca");
}

TEST_CASE("noise channel is deterministic per seed and respects whitespace") {
  std::vector<std::string> alpha;
  for (char c = 'a'; c <= 'z'; ++c) alpha.emplace_back(1, c);
  std::string text;
  for (int i = 0; i < 200; ++i) text += "the quick brown fox jumps over the dog\n";
  std::string n1 = SimulateNoise(text, alpha, 0.1, 0.02, 0.02, 7);
  std::string n2 = SimulateNoise(text, alpha, 0.1, 0.02, 0.02, 7);
  CHECK(n1 == n2);
  std::string n3 = SimulateNoise(text, alpha, 0.1, 0.02, 0.02, 8);
  CHECK(n1 != n3);
  // Line and word structure survive.
  auto count = [](const std::string& s, char c) {
    return std::count(s.begin(), s.end(), c);
  };
  CHECK(count(n1, '\n') == count(text, '\n'));
  CHECK(count(n1, ' ') == count(text, ' '));
}

TEST_CASE("noise channel hits its substitution rate on a long text") {
  std::vector<std::string> alpha;
  for (char c = 'a'; c <= 'z'; ++c) alpha.emplace_back(1, c);
  std::string text;
  for (int i = 0; i < 2000; ++i) text += "abcdefghijklmnopqrstuvwxyz";
  std::string noisy = SimulateNoise(text, alpha, 0.05, 0.0, 0.0, 13);
  REQUIRE(noisy.size() == text.size());
  std::size_t diff = 0;
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] != noisy[i]) ++diff;
  double rate = double(diff) / double(text.size());
  CHECK(rate > 0.04);
  CHECK(rate < 0.06);
}

TEST_CASE("noise channel validates probabilities") {
  std::vector<std::string> alpha{"a"};
  CHECK_THROWS_AS(SimulateNoise("a", alpha, -0.1, 0, 0, 1), std::runtime_error);
  CHECK_THROWS_AS(SimulateNoise("a", alpha, 1.0, 0, 0, 1), std::runtime_error);
  CHECK_THROWS_AS(SimulateNoise("a", alpha, 0.6, 0.6, 0, 1), std::runtime_error);
}
