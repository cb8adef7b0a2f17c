// planar-pnp: solve one planar pose problem or run the synthetic benchmarks.
//
//   planar-pnp solve <file> [--prior-deg <deg>]
//   planar-pnp bench <points|noise|time> [--seed N] [--trials N] [--out PATH]
//
// Exit codes: 0 success, 1 input/usage error, 2 solver failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "planar_pnp/cli_io.hpp"
#include "planar_pnp/errors.hpp"
#include "planar_pnp/harness.hpp"
#include "planar_pnp/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

int RunSolve(const std::string& path, const std::optional<double>& prior_deg) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitInput;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  planar_pnp::SolveRequest req;
  try {
    req = planar_pnp::ParseSolveInput(buffer.str());
  } catch (const planar_pnp::InputError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const planar_pnp::DegenerateRotation& e) {
    std::cerr << "error: " << path << ": camera_offset: " << e.what() << "\n";
    return kExitSolver;
  }
  if (prior_deg) req.heading_prior = *prior_deg * std::numbers::pi / 180.0;

  try {
    const planar_pnp::Solution sol = planar_pnp::Solve(req);
    std::cout << planar_pnp::FormatSolution(sol);
    if (!sol.refine_result.converged) {
      std::cerr << "error: refinement stopped after "
                << sol.refine_result.iterations << " iterations without converging\n";
      return kExitSolver;
    }
  } catch (const planar_pnp::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const planar_pnp::PnpError& e) {
    std::cerr << "error: solver failed: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int RunBench(planar_pnp::SweepKind kind, std::uint64_t seed, int trials,
             const std::string& out_path, const std::string& raw_path) {
  planar_pnp::ScenarioConfig cfg;
  cfg.master_seed = seed;
  cfg.trials = trials;
  try {
    planar_pnp::ValidateConfig(cfg);
  } catch (const planar_pnp::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitInput;
    }
  }
  std::ofstream raw_file;
  if (!raw_path.empty()) {
    raw_file.open(raw_path, std::ios::binary | std::ios::trunc);
    if (!raw_file) {
      std::cerr << "error: cannot write " << raw_path << "\n";
      return kExitInput;
    }
  }

  std::vector<std::vector<planar_pnp::TrialRecord>> raw;
  const auto rows = planar_pnp::RunSweep(kind, cfg, &raw);
  std::ostream& out = out_path.empty() ? std::cout : file;
  planar_pnp::WriteSweepCsv(out, rows);
  out.flush();
  if (!out) {
    std::cerr << "error: failed writing " << (out_path.empty() ? "stdout" : out_path) << "\n";
    return kExitInput;
  }
  if (raw_file.is_open()) {
    planar_pnp::WriteTrialCsv(raw_file, planar_pnp::SweepValues(kind), raw);
    if (!raw_file) {
      std::cerr << "error: failed writing " << raw_path << "\n";
      return kExitInput;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar camera pose from point correspondences", "planar-pnp"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Estimate (x, y, theta) from a JSON input file");
  std::string input_path;
  std::optional<double> prior_deg;
  solve->add_option("file", input_path, "Input document")->required();
  solve->add_option("--prior-deg", prior_deg, "Heading prior in degrees");

  auto* bench = app.add_subcommand("bench", "Run a synthetic sweep and write CSV");
  planar_pnp::SweepKind kind = planar_pnp::SweepKind::kPoints;
  const std::map<std::string, planar_pnp::SweepKind> kinds{
      {"points", planar_pnp::SweepKind::kPoints},
      {"noise", planar_pnp::SweepKind::kNoise},
      {"time", planar_pnp::SweepKind::kTiming}};
  std::uint64_t seed = 0;
  int trials = 250;
  std::string out_path;
  std::string raw_path;
  bench->add_option("kind", kind, "points | noise | time")
      ->required()
      ->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  bench->add_option("--seed", seed, "Master seed");
  bench->add_option("--trials", trials, "Trials per swept value")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "CSV output path (default: stdout)");
  bench->add_option("--raw", raw_path, "Also dump per-trial records as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (solve->parsed()) return RunSolve(input_path, prior_deg);
  return RunBench(kind, seed, trials, out_path, raw_path);
}
