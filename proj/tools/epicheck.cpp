#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epi/io.hpp"
#include "epi/oracle.hpp"

namespace {

int run_check(const std::string& path, const epi::CliOverrides& overrides) {
  std::istringstream buffered;
  std::istream* in = nullptr;
  std::ifstream file;
  std::string display = path;
  if (path == "-") {
    display = "<stdin>";
    std::ostringstream all;
    all << std::cin.rdbuf();
    buffered.str(all.str());
    in = &buffered;
  } else {
    file.open(path);
    if (!file) {
      std::cerr << "epicheck: cannot open '" << path << "'\n";
      return 2;
    }
    in = &file;
  }

  try {
    const epi::InputDocument doc = epi::parse_input(*in);
    std::cout << epi::run_checks(doc, overrides);
    return 0;
  } catch (const epi::ParseError& e) {
    std::cerr << display << ":" << e.line << ":" << e.col << ": "
              << e.message << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "epicheck: internal error: " << e.what() << "\n";
    return 3;
  }
}

struct GenArgs {
  bool scene = false;
  std::string degenerate;
  int m = 7;
  std::uint64_t seed = 1;
  bool calibrated = false;
  std::vector<int> tau;
  int target_rank = 4;
  std::string out;
};

int run_gen(const GenArgs& g) {
  std::vector<epi::Correspondence> corrs;
  std::string header;
  try {
    if (g.scene) {
      const epi::Scene s = epi::generate_scene(g.m, g.calibrated, g.seed);
      corrs = s.corrs;
      header = "scene m=" + std::to_string(g.m) +
               " seed=" + std::to_string(g.seed) +
               (g.calibrated ? " calibrated" : " uncalibrated");
    } else {
      epi::DegenerateConfig cfg;
      if (g.degenerate == "collinear_split")
        cfg.kind = epi::DegenerateKind::CollinearSplit;
      else if (g.degenerate == "repeated_point")
        cfg.kind = epi::DegenerateKind::RepeatedPoint;
      else if (g.degenerate == "homography")
        cfg.kind = epi::DegenerateKind::HomographyRelated;
      else if (g.degenerate == "rank_deficient")
        cfg.kind = epi::DegenerateKind::RankDeficientTarget;
      else {
        std::cerr << "epicheck: unknown degenerate kind '" << g.degenerate
                  << "' (expected collinear_split, repeated_point, "
                     "homography, or rank_deficient)\n";
        return 2;
      }
      cfg.tau = g.tau;
      cfg.target_rank = g.target_rank;
      corrs = epi::generate_degenerate(cfg, g.m, g.seed);
      header = "degenerate " + g.degenerate + " m=" + std::to_string(g.m) +
               " seed=" + std::to_string(g.seed);
      if (cfg.kind == epi::DegenerateKind::RankDeficientTarget)
        header += " target_rank=" + std::to_string(g.target_rank);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "epicheck: " << e.what() << "\n";
    return 2;
  }

  const std::string text = epi::format_input(corrs, header);
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(g.out);
    if (!f) {
      std::cerr << "epicheck: cannot write '" << g.out << "'\n";
      return 2;
    }
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact existence checks for fundamental and essential matrices over "
      "point correspondences"};
  app.require_subcommand(1);

  // --- check ---
  auto* check = app.add_subcommand(
      "check", "Decide matrix existence for instances in an input file");
  std::string path;
  std::string mode_str;
  bool witness_flag = false;
  bool early_flag = false;
  bool json = false;
  bool no_timing = false;
  check->add_option("file", path, "Input file, or '-' for stdin")->required();
  auto* mode_opt =
      check->add_option("--mode", mode_str,
                        "Which checks to run: fundamental, essential, both");
  auto* witness_opt = check->add_flag(
      "--witness,!--no-witness", witness_flag,
      "Print a witness matrix when existence holds (overrides the document)");
  auto* early_opt = check->add_flag(
      "--early-exit-rank4,!--no-early-exit-rank4", early_flag,
      "Answer yes immediately when rank(Z) <= 4 (overrides the document)");
  check->add_flag("--json", json, "Emit a JSON report instead of text");
  check->add_flag("--no-timing", no_timing,
                  "Omit per-instance timing (for byte-stable output)");

  // --- gen ---
  auto* gen = app.add_subcommand(
      "gen", "Generate a synthetic instance in the input format");
  GenArgs g;
  auto* scene_opt =
      gen->add_flag("--scene", g.scene, "Random two-view scene projections");
  auto* degen_opt = gen->add_option(
      "--degenerate", g.degenerate,
      "Structured degenerate instance: collinear_split, repeated_point, "
      "homography, rank_deficient");
  scene_opt->excludes(degen_opt);
  gen->add_option("--m", g.m, "Number of correspondences")->required();
  gen->add_option("--seed", g.seed, "Generator seed (default 1)");
  gen->add_flag("--calibrated", g.calibrated,
                "Scene only: calibrated cameras (ground truth is essential)");
  gen->add_option("--tau", g.tau,
                  "collinear_split only: 0-based indices whose x-points are "
                  "collinear");
  gen->add_option("--target-rank", g.target_rank,
                  "rank_deficient only: wanted rank(Z), 1..8");
  gen->add_option("-o,--out", g.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*check) {
    epi::CliOverrides o;
    if (mode_opt->count() > 0) {
      const auto m = epi::parse_check_mode(mode_str);
      if (!m) {
        std::cerr << "epicheck: unknown mode '" << mode_str
                  << "' (expected fundamental, essential, or both)\n";
        return 2;
      }
      o.mode = m;
    }
    if (witness_opt->count() > 0) o.witness = witness_flag;
    if (early_opt->count() > 0) o.early_exit_rank4 = early_flag;
    o.json = json;
    o.include_timing = !no_timing;
    return run_check(path, o);
  }

  if (!g.scene && degen_opt->count() == 0) {
    std::cerr << "epicheck: gen requires --scene or --degenerate <kind>\n";
    return 2;
  }
  return run_gen(g);
}
