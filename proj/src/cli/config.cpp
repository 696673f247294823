#include "bangbang/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bangbang::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "required field missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

int integer(const json& v, const std::string& path, int min_value) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < min_value) fail(path, "must be >= " + std::to_string(min_value));
  return static_cast<int>(x);
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

PiecewisePoly parse_pieces(const json& pieces, const std::string& path, double radius) {
  if (!pieces.is_array() || pieces.empty()) fail(path, "expected a non-empty array of pieces");
  std::vector<double> breaks;
  std::vector<LaurentPoly> polys;
  const double tol = 1e-12 * radius;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const std::string pp = at(path, p);
    const json& piece = pieces[p];
    if (!piece.is_object()) fail(pp, "expected an object");
    check_keys(piece, pp, {"r_lo", "r_hi", "coefficients", "lowest_power"});
    const double lo = number(require(piece, pp, "r_lo"), pp + ".r_lo");
    const double hi = number(require(piece, pp, "r_hi"), pp + ".r_hi");
    if (!(hi > lo)) fail(pp, "r_hi must exceed r_lo");
    if (p == 0) {
      if (std::abs(lo) > tol) fail(pp + ".r_lo", "the first piece must start at r = 0");
      breaks.push_back(0.0);
    } else if (std::abs(lo - breaks.back()) > tol) {
      fail(pp + ".r_lo", "pieces must be contiguous (gap or overlap after r = " + std::to_string(breaks.back()) + ")");
    }
    breaks.push_back(hi);
    const json& coeffs = require(piece, pp, "coefficients");
    if (!coeffs.is_array()) fail(pp + ".coefficients", "expected an array of numbers");
    std::vector<double> c;
    for (std::size_t j = 0; j < coeffs.size(); ++j) c.push_back(number(coeffs[j], at(pp + ".coefficients", j)));
    int lowest = 0;
    if (piece.contains("lowest_power")) {
      const json& lp = piece.at("lowest_power");
      if (!lp.is_number_integer()) fail(pp + ".lowest_power", "expected an integer");
      lowest = lp.get<int>();
    }
    polys.emplace_back(lowest, std::move(c));
  }
  if (std::abs(breaks.back() - radius) > tol) {
    fail(path, "pieces must end at the domain radius " + std::to_string(radius));
  }
  breaks.back() = radius;
  return {std::move(breaks), std::move(polys)};
}

void parse_solver(const json& s, SolverSettings& out) {
  const std::string p = "solver";
  if (!s.is_object()) fail(p, "expected an object");
  check_keys(s, p,
             {"h", "nx", "ny", "measure_rule", "damping", "step_rule", "tol_gap", "tol_change", "max_iters", "cg_tol",
              "sample_count", "saddle_samples", "residual_samples"});
  if (s.contains("h")) out.h = positive(s["h"], p + ".h");
  if (s.contains("nx")) out.nx = static_cast<std::size_t>(integer(s["nx"], p + ".nx", 1));
  if (s.contains("ny")) out.ny = static_cast<std::size_t>(integer(s["ny"], p + ".ny", 1));
  if (s.contains("measure_rule")) {
    const auto rule = text(s["measure_rule"], p + ".measure_rule");
    if (rule == "staircase") {
      out.measure_rule = grid::MeasureRule::Staircase;
    } else if (rule == "cut_cell") {
      out.measure_rule = grid::MeasureRule::CutCell;
    } else {
      fail(p + ".measure_rule", "expected \"staircase\" or \"cut_cell\"");
    }
  }
  if (s.contains("damping")) {
    out.damping = positive(s["damping"], p + ".damping");
    if (out.damping > 1.0) fail(p + ".damping", "must lie in (0, 1]");
  }
  if (s.contains("step_rule")) {
    const auto rule = text(s["step_rule"], p + ".step_rule");
    if (rule == "backtracking") {
      out.step_rule = saddle::StepRule::Backtracking;
    } else if (rule == "constant") {
      out.step_rule = saddle::StepRule::Constant;
    } else {
      fail(p + ".step_rule", "expected \"backtracking\" or \"constant\"");
    }
  }
  if (s.contains("tol_gap")) out.tol_gap = positive(s["tol_gap"], p + ".tol_gap");
  if (s.contains("tol_change")) out.tol_change = positive(s["tol_change"], p + ".tol_change");
  if (s.contains("max_iters")) out.max_iters = integer(s["max_iters"], p + ".max_iters", 1);
  if (s.contains("cg_tol")) out.cg_tol = positive(s["cg_tol"], p + ".cg_tol");
  if (s.contains("sample_count")) out.sample_count = integer(s["sample_count"], p + ".sample_count", 2);
  if (s.contains("saddle_samples")) out.saddle_samples = integer(s["saddle_samples"], p + ".saddle_samples", 0);
  if (s.contains("residual_samples")) {
    out.residual_samples = integer(s["residual_samples"], p + ".residual_samples", 1);
  }
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Ball:
      return "ball";
    case DomainKind::Rectangle:
      return "rectangle";
    case DomainKind::DiskInRectangle:
      return "disk_in_rectangle";
  }
  return "?";
}

std::string to_string(grid::MeasureRule rule) {
  return rule == grid::MeasureRule::CutCell ? "cut_cell" : "staircase";
}

Config parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("$", "the configuration must be a JSON object");
  check_keys(doc, "", {"description", "domain", "materials", "constraint_mode", "loads", "solver"});
  Config cfg;
  cfg.raw = doc;
  cfg.hash = hex64(fnv1a64(doc.dump()));
  cfg.base_dir = base_dir.empty() ? std::filesystem::path{} : std::filesystem::absolute(base_dir).lexically_normal();

  // domain
  const json& dom = require(doc, "", "domain");
  if (!dom.is_object()) fail("domain", "expected an object");
  const auto kind = text(require(dom, "domain", "kind"), "domain.kind");
  double radius_for_sources = 0.0;
  if (kind == "ball") {
    check_keys(dom, "domain", {"kind", "dimension", "radius"});
    cfg.kind = DomainKind::Ball;
    Ball b;
    b.dimension = dom.contains("dimension") ? integer(dom["dimension"], "domain.dimension", 1) : 2;
    b.radius = positive(require(dom, "domain", "radius"), "domain.radius");
    radius_for_sources = b.radius;
    cfg.problem.domain = b;
  } else if (kind == "rectangle" || kind == "disk_in_rectangle") {
    check_keys(dom, "domain", {"kind", "dimension", "width", "height"});
    if (dom.contains("dimension") && integer(dom["dimension"], "domain.dimension", 1) != 2) {
      fail("domain.dimension", "grid domains are two-dimensional");
    }
    cfg.kind = kind == "rectangle" ? DomainKind::Rectangle : DomainKind::DiskInRectangle;
    Rectangle r;
    r.width = positive(require(dom, "domain", "width"), "domain.width");
    r.height = positive(require(dom, "domain", "height"), "domain.height");
    r.disk_mask = cfg.kind == DomainKind::DiskInRectangle;
    radius_for_sources = r.disk_mask ? 0.5 * std::min(r.width, r.height) : 0.5 * std::hypot(r.width, r.height);
    cfg.problem.domain = r;
  } else {
    fail("domain.kind", "expected \"ball\", \"rectangle\" or \"disk_in_rectangle\"");
  }
  const double mu = measure(cfg.problem.domain);

  // constraint mode
  ConstraintMode mode = ConstraintMode::Exact;
  if (doc.contains("constraint_mode")) {
    const auto m = text(doc["constraint_mode"], "constraint_mode");
    if (m == "exact") {
      mode = ConstraintMode::Exact;
    } else if (m == "upper") {
      mode = ConstraintMode::UpperBound;
    } else {
      fail("constraint_mode", "expected \"exact\" or \"upper\"");
    }
  }

  // materials
  const json& mats = require(doc, "", "materials");
  if (!mats.is_array() || mats.empty()) fail("materials", "expected a non-empty array");
  std::vector<double> amounts;
  int with_fraction = 0;
  int with_quantity = 0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const std::string mp = at("materials", i);
    const json& m = mats[i];
    if (!m.is_object()) fail(mp, "expected an object");
    check_keys(m, mp, {"label", "lambda_min", "lambda_max", "quantity", "fraction"});
    Material mat;
    mat.label = text(require(m, mp, "label"), mp + ".label");
    mat.lambda_min = positive(require(m, mp, "lambda_min"), mp + ".lambda_min");
    mat.lambda_max = m.contains("lambda_max") ? positive(m["lambda_max"], mp + ".lambda_max") : mat.lambda_min;
    if (mat.lambda_max < mat.lambda_min) fail(mp + ".lambda_max", "must be >= lambda_min");
    const bool has_q = m.contains("quantity");
    const bool has_f = m.contains("fraction");
    if (has_q == has_f) fail(mp, "exactly one of \"quantity\" or \"fraction\" is required");
    if (has_q) {
      ++with_quantity;
      amounts.push_back(number(m["quantity"], mp + ".quantity"));
    } else {
      ++with_fraction;
      amounts.push_back(number(m["fraction"], mp + ".fraction"));
    }
    if (amounts.back() < 0.0) fail(mp + (has_q ? ".quantity" : ".fraction"), "must be non-negative");
    cfg.problem.materials.push_back(std::move(mat));
  }
  if (with_fraction > 0 && with_quantity > 0) {
    fail("materials", "quantities and fractions cannot be mixed in one configuration");
  }
  cfg.fractions = with_fraction > 0;
  double sum = 0.0;
  for (double a : amounts) sum += a;
  if (cfg.fractions) {
    if (mode == ConstraintMode::Exact && std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream os;
      os.precision(17);
      os << "fractions must sum to 1 in exact mode (sum is " << sum << ")";
      fail("materials[].fraction", os.str());
    }
    // Exact mode: rescale so the quantities sum to mu(Omega) to rounding.
    const double scale = mode == ConstraintMode::Exact ? mu / sum : mu;
    for (double& a : amounts) a *= scale;
  }
  cfg.problem.constraint = {amounts, mode};
  try {
    cfg.problem.constraint.validate(mu);
  } catch (const Error& e) {
    fail("materials[].quantity", e.what());
  }

  // loads
  const json& loads = require(doc, "", "loads");
  if (!loads.is_array() || loads.empty()) fail("loads", "expected a non-empty array");
  for (std::size_t l = 0; l < loads.size(); ++l) {
    const std::string lp = at("loads", l);
    const json& load = loads[l];
    if (!load.is_object()) fail(lp, "expected an object");
    check_keys(load, lp, {"source", "weight"});
    LoadCase lc;
    lc.weight = load.contains("weight") ? positive(load["weight"], lp + ".weight") : 1.0;
    const json& src = require(load, lp, "source");
    if (!src.is_object()) fail(lp + ".source", "expected an object");
    check_keys(src, lp + ".source", {"pieces", "grid_file"});
    const bool has_pieces = src.contains("pieces");
    const bool has_file = src.contains("grid_file");
    if (has_pieces == has_file) fail(lp + ".source", "exactly one of \"pieces\" or \"grid_file\" is required");
    if (has_pieces) {
      lc.source = parse_pieces(src["pieces"], lp + ".source.pieces", radius_for_sources);
      cfg.grid_files.emplace_back();
    } else {
      if (cfg.kind == DomainKind::Ball) fail(lp + ".source.grid_file", "grid sources need a grid domain");
      std::filesystem::path file = text(src["grid_file"], lp + ".source.grid_file");
      if (file.is_relative()) file = base_dir / file;
      if (!std::filesystem::exists(file)) fail(lp + ".source.grid_file", "file not found: " + file.string());
      lc.source = SampledField{};
      cfg.grid_files.push_back(file.string());
    }
    cfg.problem.loads.push_back(std::move(lc));
  }

  if (doc.contains("solver")) parse_solver(doc["solver"], cfg.solver);
  if (cfg.kind != DomainKind::Ball) {
    if (cfg.solver.h == 0.0 && (cfg.solver.nx == 0 || cfg.solver.ny == 0)) {
      fail("solver.h", "grid domains need a spacing h (or both nx and ny)");
    }
  }

  try {
    cfg.problem.validate();
  } catch (const Error& e) {
    fail("$", e.what());
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, std::filesystem::absolute(path).parent_path());
}

}  // namespace bangbang::cli
