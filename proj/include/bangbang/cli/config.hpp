#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bangbang/core.hpp"
#include "bangbang/error.hpp"
#include "bangbang/grid.hpp"
#include "bangbang/saddle.hpp"
#include "json.hpp"

namespace bangbang::cli {

/// Invalid or incomplete configuration. The message starts with the JSON
/// path of the offending field, e.g. "materials[1].lambda_min: ...".
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class DomainKind { Ball, Rectangle, DiskInRectangle };

struct SolverSettings {
  // grid
  double h = 0.0;  // 0: use nx/ny
  std::size_t nx = 0;
  std::size_t ny = 0;
  grid::MeasureRule measure_rule = grid::MeasureRule::CutCell;
  double damping = 1.0;
  saddle::StepRule step_rule = saddle::StepRule::Backtracking;
  double tol_gap = 1e-3;
  double tol_change = 1e-9;
  int max_iters = 100;
  double cg_tol = 1e-10;
  // radial
  int sample_count = 2048;
  int saddle_samples = 100;
  int residual_samples = 200;
};

struct Config {
  DomainKind kind = DomainKind::Ball;
  ProblemSpec problem;
  bool fractions = false;  // quantities were given as fractions
  SolverSettings solver;
  std::vector<std::string> grid_files;  // per load, resolved path or empty
  nlohmann::json raw;
  std::string hash;  // FNV-1a 64 of the canonical JSON, hex
  std::filesystem::path base_dir;  // directory relative grid_file paths resolve against
};

/// Validates a configuration document. Relative grid_file paths resolve
/// against base_dir.
Config parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::string to_string(DomainKind kind);
std::string to_string(grid::MeasureRule rule);

}  // namespace bangbang::cli
