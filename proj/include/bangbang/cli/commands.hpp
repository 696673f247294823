#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bangbang/cli/config.hpp"
#include "bangbang/measure_alloc.hpp"
#include "bangbang/radial.hpp"
#include "bangbang/saddle.hpp"
#include "json.hpp"

namespace bangbang::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<int> samples;  // overrides solver.sample_count
  std::uint64_t seed = 1;
  std::ostream* log = nullptr;  // progress lines, if set
};

/// Radial pipeline on a ball, in reduced material coordinates.
struct RadialRun {
  MaterialReduction reduction;
  std::vector<radial::RadialFlux> fluxes;
  std::vector<double> weights;
  radial::PsiFunction psi;
  std::optional<radial::RadialDistribution> distribution;
  radial::RadialDesign design;
};

RadialRun run_radial_pipeline(const Config& cfg);

/// Grid problem for a rectangle or disk_in_rectangle configuration.
struct GridSetup {
  std::unique_ptr<grid::Grid2D> grid;
  MaterialReduction reduction;
  saddle::GridProblem problem;
};

GridSetup build_grid_problem(const Config& cfg);

nlohmann::json cmd_radial(const Config& cfg, const RunOptions& opts);
nlohmann::json cmd_grid(const Config& cfg, const RunOptions& opts);
nlohmann::json cmd_distribution(const Config& cfg, const RunOptions& opts);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Verdict {
  std::vector<Check> checks;
  [[nodiscard]] bool passed() const;
};

/// Re-derives the certificates of a previous run from the files in
/// opts.out_dir (report.json plus curves or fields), without solver state.
Verdict cmd_verify(const RunOptions& opts);

struct CommandLine {
  std::string command;
  std::filesystem::path config;
  RunOptions options;
};

/// Runs one command and maps failures to exit codes: 2 for configuration
/// errors, 3 for solver errors, 1 when verification fails.
int run_command(const CommandLine& cl, std::ostream& out, std::ostream& err);

}  // namespace bangbang::cli
