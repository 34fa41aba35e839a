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
//
// rnr: reduce-and-reconstruct workflow driver. Subcommands cover the whole
// pipeline: reduce, train-lm, build, reconstruct, evaluate, simulate-noise,
// random-reduction, vocab-extract, pipeline.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rnr/eval.hpp"
#include "rnr/pipeline.hpp"
#include "rnr/reconstruct.hpp"

namespace fs = std::filesystem;
using namespace rnr;

namespace {

std::vector<std::string> ReadInput(const std::string& path) {
  if (path.empty() || path == "-") {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(std::cin, line)) lines.push_back(line);
    return lines;
  }
  return ReadLines(path);
}

DictConfig LoadVocab(const std::string& path, const ReductionMap& map, double eta) {
  DictConfig dict;
  dict.eta = eta;
  for (const std::string& line : ReadLines(path)) {
    if (line.empty() || line[0] == '#') continue;
    std::string word = line.substr(0, line.find('\t'));
    if (word.empty()) continue;
    dict.vocabulary.emplace_back(word, map.SplitGraphemes(word));
  }
  return dict;
}

void WriteFstFile(const Wfst& f, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteFstText(f, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reduce-and-reconstruct WFST toolkit"};
  app.require_subcommand(1);

  // Shared hyperparameters, defaults per the tuned setup.
  std::string mapping_path, text_path, vocab_path, arpa_path, out_path, ref_path, hyp_path;
  int d = 3, order = 4, jobs = 1;
  double lambda = 5.0, eta = 100.0;
  std::uint64_t seed = 1;
  bool permissive = false;

  auto* c_reduce = app.add_subcommand("reduce", "apply a reduction map to text");
  c_reduce->add_option("--mapping", mapping_path, "TSV reduction map")->required();
  c_reduce->add_option("--text", text_path, "input text file ('-' for stdin)");
  c_reduce->add_flag("--permissive", permissive, "pass unknown graphemes through");

  std::string discount_str;
  auto* c_train = app.add_subcommand("train-lm", "train a Kneser-Ney n-gram LM");
  c_train->add_option("--text", text_path, "training text")->required();
  c_train->add_option("--order", order, "n-gram order")->capture_default_str();
  c_train->add_option("--discount", discount_str, "fixed discount in [0,1); default data-driven");
  c_train->add_option("--out-arpa", out_path, "ARPA output path")->required();

  auto* c_build = app.add_subcommand("build", "build the S/E/L/G cascade machines");
  c_build->add_option("--mapping", mapping_path, "TSV reduction map")->required();
  c_build->add_option("--vocab", vocab_path, "word list (one word per line)")->required();
  c_build->add_option("--arpa", arpa_path, "ARPA language model")->required();
  c_build->add_option("--d", d, "max edits per word")->capture_default_str();
  c_build->add_option("--lambda", lambda, "cost per edit")->capture_default_str();
  c_build->add_option("--eta", eta, "unk penalty")->capture_default_str();
  c_build->add_option("--outdir", out_path, "output directory")->required();

  auto* c_recon = app.add_subcommand("reconstruct", "run shortestpath(H o S o E o L o G)");
  c_recon->add_option("--mapping", mapping_path, "TSV reduction map")->required();
  c_recon->add_option("--vocab", vocab_path, "word list")->required();
  c_recon->add_option("--arpa", arpa_path, "ARPA language model")->required();
  c_recon->add_option("--d", d, "max edits per word")->capture_default_str();
  c_recon->add_option("--lambda", lambda, "cost per edit")->capture_default_str();
  c_recon->add_option("--eta", eta, "unk penalty")->capture_default_str();
  c_recon->add_option("--hyp", hyp_path, "hypotheses, `id<TAB>text` or bare text ('-' for stdin)")->required();
  c_recon->add_option("--out", out_path, "output TSV ('-' for stdout)");
  c_recon->add_option("--jobs", jobs, "parallel workers")->capture_default_str();

  std::string unit = "word", metric = "wer", identity_hyp_path;
  auto* c_eval = app.add_subcommand("evaluate", "WER / r-WER / substitution-correction");
  c_eval->add_option("--ref", ref_path, "reference text")->required();
  c_eval->add_option("--hyp", hyp_path, "hypothesis text")->required();
  c_eval->add_option("--mapping", mapping_path, "TSV reduction map (rwer/subcorrection)");
  c_eval->add_option("--unit", unit, "word|grapheme")->capture_default_str();
  c_eval->add_option("--metric", metric, "wer|rwer|subcorrection")->capture_default_str();
  c_eval->add_option("--identity-hyp", identity_hyp_path,
                     "identity-system hypothesis (subcorrection)");

  double p_sub = 0.05, p_del = 0.0, p_ins = 0.0;
  std::string alphabet_path;
  auto* c_noise = app.add_subcommand("simulate-noise", "grapheme noise channel");
  c_noise->add_option("--text", text_path, "input text ('-' for stdin)");
  c_noise->add_option("--alphabet", alphabet_path,
                      "grapheme inventory, one per line (default: derived from text)");
  c_noise->add_option("--p-sub", p_sub, "substitution probability")->capture_default_str();
  c_noise->add_option("--p-del", p_del, "deletion probability")->capture_default_str();
  c_noise->add_option("--p-ins", p_ins, "insertion probability")->capture_default_str();
  c_noise->add_option("--seed", seed, "random seed")->capture_default_str();

  int target_size = 0;
  auto* c_rand = app.add_subcommand("random-reduction", "size-matched random reduction map");
  c_rand->add_option("--alphabet", alphabet_path, "grapheme inventory, one per line")->required();
  c_rand->add_option("--size", target_size, "reduced alphabet size")->required();
  c_rand->add_option("--seed", seed, "random seed")->capture_default_str();
  c_rand->add_option("--out", out_path, "output mapping TSV")->required();

  auto* c_vocab = app.add_subcommand("vocab-extract", "word list and grapheme alphabet");
  c_vocab->add_option("--text", text_path, "corpus ('-' for stdin)");
  c_vocab->add_option("--out-words", out_path, "word list output (default stdout)");
  c_vocab->add_option("--out-graphemes", alphabet_path, "grapheme list output");

  std::string config_path;
  auto* c_pipe = app.add_subcommand("pipeline", "full synthetic experiment from a config file");
  c_pipe->add_option("--config", config_path, "key=value config file")->required();
  c_pipe->add_option("--outdir", out_path, "override output directory");
  c_pipe->add_option("--seed", seed, "override seed");
  bool seed_given = false, outdir_given = false;

  try {
    app.parse(argc, argv);
    seed_given = c_pipe->count("--seed") > 0;
    outdir_given = c_pipe->count("--outdir") > 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*c_reduce) {
      ReductionMap m = ReductionMap::Load(mapping_path);
      std::size_t unknown = 0;
      for (const std::string& line : ReadInput(text_path))
        std::cout << m.Apply(line, permissive, &unknown) << "\n";
      if (unknown > 0)
        std::cerr << "reduce: " << unknown << " unknown graphemes passed through\n";
    } else if (*c_train) {
      std::optional<double> discount;
      if (!discount_str.empty()) discount = std::stod(discount_str);
      NGramModel lm = NGramModel::Train(ReadLines(text_path), order, discount);
      lm.ExportArpa(out_path);
    } else if (*c_build) {
      ReductionMap m = ReductionMap::Load(mapping_path);
      DictConfig dict = LoadVocab(vocab_path, m, eta);
      EditConfig edit{d, lambda};
      CheckPenaltyDominatesEdits(edit, dict);
      NGramModel lm = NGramModel::ImportArpa(arpa_path);
      CascadeAssets assets(m, dict, edit, lm);
      fs::create_directories(out_path);
      WriteFstFile(assets.S(), fs::path(out_path) / "S.fst.txt");
      WriteFstFile(assets.E(), fs::path(out_path) / "E.fst.txt");
      WriteFstFile(assets.L(), fs::path(out_path) / "L.fst.txt");
      WriteFstFile(assets.G(), fs::path(out_path) / "G.fst.txt");
    } else if (*c_recon) {
      ReductionMap m = ReductionMap::Load(mapping_path);
      DictConfig dict = LoadVocab(vocab_path, m, eta);
      NGramModel lm = NGramModel::ImportArpa(arpa_path);
      CascadeAssets assets(m, dict, EditConfig{d, lambda}, lm);
      std::vector<Reconstruction> recons =
          hyp_path == "-" ? ReconstructLines(ReadInput(hyp_path), assets, jobs)
                          : ReconstructFile(hyp_path, assets, jobs);
      std::ofstream file;
      if (!out_path.empty() && out_path != "-") file.open(out_path);
      std::ostream& os = file.is_open() ? file : std::cout;
      os << std::fixed << std::setprecision(6);
      for (const auto& r : recons) {
        std::string s;
        for (const auto& w : r.words) {
          if (!s.empty()) s += ' ';
          s += w;
        }
        if (r.ok)
          os << r.id << "\t" << s << "\t" << r.total_cost << "\t" << r.edit_cost << "\t"
             << r.unk_cost << "\t" << r.lm_cost << "\n";
        else
          os << r.id << "\tERROR\t" << r.error << "\n";
      }
    } else if (*c_eval) {
      std::vector<std::string> ref = ReadLines(ref_path), hyp = ReadLines(hyp_path);
      if (metric == "wer") {
        WerResult r;
        if (unit == "grapheme") {
          if (mapping_path.empty())
            throw std::runtime_error("evaluate: --unit grapheme requires --mapping");
          ReductionMap m = ReductionMap::Load(mapping_path);
          std::vector<std::string> rg, hg;
          for (std::size_t i = 0; i < ref.size(); ++i) {
            auto a = GraphemeTokens(m, ref[i]);
            auto b = GraphemeTokens(m, hyp.at(i));
            AlignmentReport rep = Align(a, b);
            r.report.substitutions += rep.substitutions;
            r.report.insertions += rep.insertions;
            r.report.deletions += rep.deletions;
            r.report.matches += rep.matches;
            r.report.ref_length += rep.ref_length;
          }
          r.rate = r.report.ref_length
                       ? double(r.report.Edits()) / double(r.report.ref_length)
                       : 0.0;
        } else {
          r = CorpusWer(ref, hyp);
        }
        std::cout << std::fixed << std::setprecision(4) << "wer\t" << 100.0 * r.rate << "\tS\t"
                  << r.report.substitutions << "\tI\t" << r.report.insertions << "\tD\t"
                  << r.report.deletions << "\tN\t" << r.report.ref_length << "\n";
      } else if (metric == "rwer") {
        if (mapping_path.empty()) throw std::runtime_error("evaluate: rwer requires --mapping");
        ReductionMap m = ReductionMap::Load(mapping_path);
        WerResult r = RWer(m, ref, hyp);
        std::cout << std::fixed << std::setprecision(4) << "rwer\t" << 100.0 * r.rate << "\n";
      } else if (metric == "subcorrection") {
        if (mapping_path.empty() || identity_hyp_path.empty())
          throw std::runtime_error(
              "evaluate: subcorrection requires --mapping and --identity-hyp");
        ReductionMap m = ReductionMap::Load(mapping_path);
        SubCorrectionResult r =
            SubstitutionCorrectionPct(ref, ReadLines(identity_hyp_path), m, hyp);
        std::cout << std::fixed << std::setprecision(4) << "subcorrection\t" << r.pct << "\tY\t"
                  << r.y << "\tX\t" << r.x << (r.no_substitutions ? "\tno-substitutions" : "")
                  << "\n";
      } else {
        throw std::runtime_error("evaluate: unknown metric '" + metric + "'");
      }
    } else if (*c_noise) {
      std::vector<std::string> lines = ReadInput(text_path);
      std::vector<std::string> alphabet;
      if (!alphabet_path.empty()) {
        for (const auto& l : ReadLines(alphabet_path))
          if (!l.empty() && l[0] != '#') alphabet.push_back(l.substr(0, l.find('\t')));
      } else {
        for (const auto& [g, c] : ExtractVocab(lines).graphemes) alphabet.push_back(g);
      }
      std::string blob;
      for (const auto& l : lines) blob += l + "\n";
      std::cout << "# seed=" << seed << " p_sub=" << p_sub << " p_del=" << p_del
                << " p_ins=" << p_ins << "\n";
      std::cout << SimulateNoise(blob, alphabet, p_sub, p_del, p_ins, seed);
    } else if (*c_rand) {
      std::vector<std::string> alphabet;
      for (const auto& l : ReadLines(alphabet_path))
        if (!l.empty() && l[0] != '#') alphabet.push_back(l.substr(0, l.find('\t')));
      ReductionMap m = ReductionMap::Random(alphabet, target_size, seed);
      m.Write(out_path);
    } else if (*c_vocab) {
      VocabInfo v = ExtractVocab(ReadInput(text_path));
      std::ofstream wf;
      if (!out_path.empty()) wf.open(out_path);
      std::ostream& wos = wf.is_open() ? wf : std::cout;
      for (const auto& [w, c] : v.words) wos << w << "\t" << c << "\n";
      if (!alphabet_path.empty()) {
        std::ofstream gf(alphabet_path);
        for (const auto& [g, c] : v.graphemes) gf << g << "\t" << c << "\n";
      }
    } else if (*c_pipe) {
      PipelineConfig cfg = PipelineConfig::Load(config_path);
      if (seed_given) cfg.seed = seed;
      if (outdir_given) cfg.outdir = out_path;
      PipelineOutcome res = RunPipeline(cfg, std::cout);
      std::cout << res.report;
    }
  } catch (const std::exception& e) {
    std::cerr << "rnr: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
