#include "bangbang/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "bangbang/cli/field_io.hpp"
#include "bangbang/cli/report.hpp"

namespace bangbang::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const Ball& require_ball(const Config& cfg, const char* command) {
  const auto* ball = std::get_if<Ball>(&cfg.problem.domain);
  if (ball == nullptr) throw ConfigError(std::string("domain.kind: the ") + command + " command needs a ball");
  return *ball;
}

int sample_count(const Config& cfg, const RunOptions& opts) { return opts.samples.value_or(cfg.solver.sample_count); }

void note(const RunOptions& opts, const std::string& line) {
  if (opts.log != nullptr) *opts.log << line << '\n';
}

std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

json thresholds_json(const Thresholds& th, const std::vector<std::vector<std::string>>& labels) {
  json out = json::array();
  for (std::size_t k = 0; k < th.alphas.size(); ++k) {
    out.push_back({{"materials", labels[k]}, {"alpha", th.alphas[k]}, {"attained", static_cast<bool>(th.attained[k])}});
  }
  return out;
}

json fat_levels_json(const std::vector<FatLevel>& ledger, const std::vector<std::vector<std::string>>& labels,
                     std::size_t n_reduced) {
  json out = json::array();
  for (const auto& f : ledger) {
    json admissible = json::array();
    json amounts = json::array();
    for (std::size_t i = f.k_minus; i <= f.k_plus; ++i) {
      admissible.push_back(labels[i]);
      amounts.push_back(f.amounts[i - f.k_minus]);
    }
    std::ostringstream family;
    family << "any fractions of the admissible materials on the level set, zero for all others, with per-material "
              "integrals equal to the listed amounts";
    json entry = {{"level", f.level},
                  {"measure", f.measure},
                  {"admissible", admissible},
                  {"amounts", amounts},
                  {"family", family.str()}};
    if (f.level == 0.0 && f.k_plus + 1 == n_reduced) {
      entry["flag"] = "level alpha = 0: admissible range closed at the last material by convention";
    }
    out.push_back(entry);
  }
  return out;
}

std::vector<double> expand_row(const MaterialReduction& red, std::span<const double> reduced) {
  return red.expand(reduced);
}

// Reduced fractions from fractions over the original materials.
std::vector<double> reduce_row(const MaterialReduction& red, std::span<const double> original) {
  std::vector<double> out(red.materials().size(), 0.0);
  for (std::size_t i = 0; i < original.size(); ++i) {
    const std::size_t g = red.reduced_index(i);
    if (g != MaterialReduction::npos) out[g] += original[i];
  }
  return out;
}

json certificate_json(const radial::CertificateReport& rep) {
  return {{"state_residual", rep.state_residual},
          {"laminate_residual", rep.laminate_residual},
          {"objective", rep.objective},
          {"saddle_samples", rep.saddle_samples},
          {"saddle_violations", rep.saddle_violations},
          {"saddle_max_excess", rep.saddle_max_excess},
          {"flux_side_note", rep.flux_side_note},
          {"volume_error", rep.volume_error},
          {"passed", rep.passed}};
}

grid::StateOptions state_options(const Config& cfg) {
  grid::StateOptions s;
  s.cg.rel_tol = cfg.solver.cg_tol;
  return s;
}

}  // namespace

RadialRun run_radial_pipeline(const Config& cfg) {
  const Ball& ball = require_ball(cfg, "radial");
  RadialRun run;
  run.reduction = MaterialReduction::build(cfg.problem.materials, cfg.problem.constraint, cfg.problem.domain_measure());
  for (const auto& load : cfg.problem.loads) {
    const auto* source = std::get_if<PiecewisePoly>(&load.source);
    if (source == nullptr) throw ConfigError("loads: radial commands need piecewise sources");
    run.fluxes.push_back(radial::radial_flux(*source, ball.dimension, ball.radius));
    run.weights.push_back(load.weight);
  }
  run.psi = radial::assemble_psi(run.fluxes, run.weights);
  run.distribution.emplace(run.psi, radial::monotone_segments(run.psi));
  run.design = radial::solve_radial_design(*run.distribution, run.reduction.materials(), run.reduction.quantities());
  return run;
}

json cmd_radial(const Config& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const RadialRun run = run_radial_pipeline(cfg);
  const auto& red = run.reduction;
  const auto& design = run.design;
  const auto labels = group_labels(cfg, red);

  radial::CertifyOptions copts;
  copts.seed = opts.seed;
  copts.saddle_samples = cfg.solver.saddle_samples;
  copts.residual_samples = cfg.solver.residual_samples;
  const auto cert = radial::certify(design, run.fluxes, run.psi, red.materials(), red.quantities(), copts);

  std::vector<radial::RadialState> states;
  for (const auto& f : run.fluxes) states.push_back(radial::reconstruct_state(f, design, red.materials()));

  fs::create_directories(opts.out_dir);
  const int samples = sample_count(cfg, opts);
  const auto radii = radial::sample_radii(design, run.psi, samples);
  {
    std::vector<std::vector<double>> psi_rows;
    std::vector<std::vector<double>> u_rows;
    std::vector<std::vector<double>> theta_rows;
    for (double r : radii) {
      psi_rows.push_back({r, run.psi(r)});
      std::vector<double> u_row{r};
      for (const auto& s : states) u_row.push_back(s(r));
      u_rows.push_back(std::move(u_row));
      std::vector<double> t_row{r};
      const auto expanded = expand_row(red, design.band_at(r).theta);
      t_row.insert(t_row.end(), expanded.begin(), expanded.end());
      theta_rows.push_back(std::move(t_row));
    }
    write_csv(opts.out_dir / "psi.csv", {"r", "psi"}, psi_rows);
    std::vector<std::string> u_header{"r"};
    for (std::size_t l = 0; l < states.size(); ++l) u_header.push_back("u_" + std::to_string(l + 1));
    write_csv(opts.out_dir / "u.csv", u_header, u_rows);
    std::vector<std::string> t_header{"r"};
    for (const auto& m : cfg.problem.materials) t_header.push_back(m.label);
    write_csv(opts.out_dir / "theta.csv", t_header, theta_rows);
  }

  json bands = json::array();
  for (const auto& b : design.bands) {
    bands.push_back({{"r_lo", b.r_lo}, {"r_hi", b.r_hi}, {"theta", expand_row(red, b.theta)}});
  }
  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "radial";
  report["config"] = cfg.raw;
  report["config_dir"] = cfg.base_dir.string();
  report["problem"] = echo_problem(cfg, red);
  report["thresholds"] = thresholds_json(design.thresholds, labels);
  report["interfaces"] = design.interfaces();
  report["bands"] = bands;
  report["fat_levels"] = fat_levels_json(design.ledger, labels, red.materials().size());
  report["objective"] = cert.objective;
  report["certificate"] = certificate_json(cert);
  report["curves"] = {{"psi", "psi.csv"}, {"u", "u.csv"}, {"theta", "theta.csv"}, {"samples", radii.size()}};
  report["provenance"] = provenance(cfg, samples, opts.seed);
  report["timestamp"] = timestamp_utc();
  write_json(opts.out_dir / "report.json", report);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  note(opts, "radial: " + std::to_string(design.bands.size()) + " bands, objective " + fmt(cert.objective) +
                 ", certificate " + (cert.passed ? "passed" : "FAILED") + " (" + fmt(seconds, 3) + " s)");
  return report;
}

GridSetup build_grid_problem(const Config& cfg) {
  const auto* rect = std::get_if<Rectangle>(&cfg.problem.domain);
  if (rect == nullptr) throw ConfigError("domain.kind: the grid command needs a rectangle or disk_in_rectangle");
  GridSetup setup;
  try {
    if (cfg.solver.h > 0.0) {
      setup.grid = std::make_unique<grid::Grid2D>(grid::Grid2D::with_spacing(*rect, cfg.solver.h, cfg.solver.measure_rule));
    } else {
      setup.grid = std::make_unique<grid::Grid2D>(*rect, cfg.solver.nx, cfg.solver.ny, cfg.solver.measure_rule);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("solver.h: ") + e.what());
  }
  const auto& g = *setup.grid;
  setup.reduction = MaterialReduction::build(cfg.problem.materials, cfg.problem.constraint, cfg.problem.domain_measure());

  auto& p = setup.problem;
  p.grid = setup.grid.get();
  p.materials = setup.reduction.materials();
  const double scale = g.total_measure() / cfg.problem.domain_measure();
  for (double q : setup.reduction.quantities()) p.quantities.push_back(q * scale);
  for (std::size_t l = 0; l < cfg.problem.loads.size(); ++l) {
    const auto& load = cfg.problem.loads[l];
    saddle::GridLoad gl;
    gl.weight = load.weight;
    if (const auto* pieces = std::get_if<PiecewisePoly>(&load.source)) {
      gl.f = grid::sample_radial(g, [pieces](double r) { return (*pieces)(std::min(r, pieces->upper())); });
    } else {
      gl.f = load_source_field(cfg.grid_files[l], g);
    }
    p.loads.push_back(std::move(gl));
  }
  return setup;
}

json cmd_grid(const Config& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  GridSetup setup = build_grid_problem(cfg);
  const auto& g = *setup.grid;
  const auto& red = setup.reduction;
  const auto& problem = setup.problem;
  fs::create_directories(opts.out_dir);

  saddle::SaddleOptions sopts;
  sopts.max_iters = cfg.solver.max_iters;
  sopts.damping = cfg.solver.damping;
  sopts.step_rule = cfg.solver.step_rule;
  sopts.tol_gap = cfg.solver.tol_gap;
  sopts.tol_change = cfg.solver.tol_change;
  sopts.state = state_options(cfg);

  std::ofstream log(opts.out_dir / "iterations.log");
  log << "# iter L U gap change residual omega accepted\n";
  log.precision(17);
  const auto record = [&](const saddle::IterationRecord& r) {
    log << r.iter << ' ' << r.lower << ' ' << r.upper << ' ' << r.gap << ' ' << r.change << ' ' << r.residual << ' '
        << r.omega << ' ' << (r.accepted ? 1 : 0) << '\n';
    if (opts.log != nullptr) {
      *opts.log << "iter " << r.iter << "  L " << fmt(r.lower) << "  U " << fmt(r.upper) << "  gap " << fmt(r.gap, 3)
                << "  change " << fmt(r.change, 3) << '\n';
    }
  };
  const auto result = saddle::alternate(problem, saddle::uniform_design(problem), sopts, record);
  log.close();

  const auto cert = saddle::certify_grid(problem, result.theta, result.state.sigma, {.state = sopts.state});

  // Fields over the original materials.
  const std::size_t n_orig = cfg.problem.materials.size();
  std::vector<double> rows;
  rows.reserve(g.active_count() * n_orig);
  double bang_bang = 0.0;
  for (std::size_t k = 0; k < g.active_count(); ++k) {
    const auto reduced = result.theta.row(k);
    const auto expanded = red.expand(reduced);
    rows.insert(rows.end(), expanded.begin(), expanded.end());
    if (*std::max_element(reduced.begin(), reduced.end()) >= 0.99) bang_bang += g.measures()[k];
  }
  std::vector<std::string> names;
  for (const auto& m : cfg.problem.materials) names.push_back(m.label);
  const auto theta_file = field_from_active(g, n_orig, rows);
  write_field_binary(opts.out_dir / "theta.bin", theta_file);
  write_field_csv(opts.out_dir / "theta.csv", g, theta_file, names);
  json u_files = json::array();
  for (std::size_t l = 0; l < result.state.u.size(); ++l) {
    const std::string name = "u_" + std::to_string(l + 1) + ".bin";
    write_field_binary(opts.out_dir / name, field_from_grid(g, result.state.u[l]));
    u_files.push_back(name);
  }
  write_field_binary(opts.out_dir / "psi.bin", field_from_active(g, 1, result.state.psi));

  const auto& diag = result.diagnostics;
  const double lower = result.bounds.lower;
  const double upper = result.bounds.upper;
  std::vector<double> volumes = result.theta.material_volumes();
  const auto labels = group_labels(cfg, red);

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "grid";
  report["config_dir"] = cfg.base_dir.string();
  report["config"] = cfg.raw;
  report["problem"] = echo_problem(cfg, red);
  report["grid"] = {{"nx", g.nx()},
                    {"ny", g.ny()},
                    {"h", g.h()},
                    {"measure_rule", to_string(g.rule())},
                    {"active_cells", g.active_count()},
                    {"total_measure", g.total_measure()}};
  report["step_rule"] = {{"rule", cfg.solver.step_rule == saddle::StepRule::Backtracking ? "backtracking" : "constant"},
                         {"damping", cfg.solver.damping}};
  report["grid_quantities"] = problem.quantities;
  report["reduced_volumes"] = volumes;
  report["lower"] = lower;
  report["upper"] = upper;
  report["gap"] = upper - lower;
  report["relative_gap"] = (upper - lower) / std::abs(lower);
  report["certified_lower"] = diag.best_lower;
  report["certified_upper"] = diag.best_upper;
  report["certified_relative_gap"] = diag.certified_gap() / std::abs(diag.best_lower);
  report["best_iteration"] = result.best_iteration;
  report["iterations"] = diag.iterations.size();
  report["converged"] = result.converged;
  report["stop_reason"] = result.stop_reason;
  report["weak_duality_holds"] = std::all_of(diag.iterations.begin(), diag.iterations.end(),
                                             [](const auto& r) { return r.upper >= r.lower; });
  report["bang_bang_fraction"] = bang_bang / g.total_measure();
  report["thresholds"] = thresholds_json(result.bounds.thresholds, labels);
  report["fat_levels"] = fat_levels_json(result.bounds.bathtub.ledger, labels, red.materials().size());
  report["certificate"] = {{"flux_residual", cert.flux_residual},
                           {"strip_violation_fraction", cert.strip_violation_fraction},
                           {"far_violation_fraction", cert.far_violation_fraction},
                           {"relative_gap", cert.relative_gap},
                           {"passed", cert.passed}};
  report["fields"] = {{"theta", "theta.bin"}, {"theta_csv", "theta.csv"}, {"u", u_files}, {"psi", "psi.bin"},
                      {"log", "iterations.log"}};
  report["provenance"] = provenance(cfg, sample_count(cfg, opts), opts.seed);
  report["timestamp"] = timestamp_utc();
  write_json(opts.out_dir / "report.json", report);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  note(opts, "grid: " + std::to_string(diag.iterations.size()) + " iterations (" + result.stop_reason +
                 "), L " + fmt(lower) + ", U " + fmt(upper) + ", certified relative gap " +
                 fmt(diag.certified_gap() / std::abs(diag.best_lower), 3) + " (" + fmt(seconds, 3) + " s)");
  return report;
}

json cmd_distribution(const Config& cfg, const RunOptions& opts) {
  const RadialRun run = run_radial_pipeline(cfg);
  const auto& dist = *run.distribution;
  const double mu = dist.total_measure();
  fs::create_directories(opts.out_dir);

  std::vector<double> levels = dist.breakpoint_levels();
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<std::vector<double>> rows;
  const auto row = [&](double kind, double a) {
    const double v = dist(a);
    const double left = dist.left_limit(a);
    rows.push_back({kind, a, v, left, v / mu, left / mu});
  };
  for (double a : levels) row(0.0, a);
  const int n = sample_count(cfg, opts);
  const double top = dist.max_psi();
  for (int k = 0; k < n; ++k) row(1.0, top * static_cast<double>(k) / std::max(1, n - 1));

  // The kind column is written as text.
  {
    std::ofstream out(opts.out_dir / "distribution.csv");
    if (!out) throw Error("distribution.csv: cannot write");
    out.precision(17);
    out << "kind,alpha,lambda,lambda_left,normalized,normalized_left\n";
    for (const auto& r : rows) {
      out << (r[0] == 0.0 ? "level" : "grid");
      for (std::size_t k = 1; k < r.size(); ++k) out << ',' << r[k];
      out << '\n';
    }
  }

  json jumps = json::array();
  for (double c : dist.fat_levels()) {
    jumps.push_back({{"alpha", c},
                     {"height", dist.left_limit(c) - dist(c)},
                     {"normalized_height", (dist.left_limit(c) - dist(c)) / mu}});
  }
  const auto labels = group_labels(cfg, run.reduction);
  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "distribution";
  report["config"] = cfg.raw;
  report["problem"] = echo_problem(cfg, run.reduction);
  report["total_measure"] = mu;
  report["max_psi"] = top;
  report["levels"] = levels;
  report["jumps"] = jumps;
  report["thresholds"] = thresholds_json(run.design.thresholds, labels);
  report["fat_levels"] = fat_levels_json(run.design.ledger, labels, run.reduction.materials().size());
  report["curves"] = {{"distribution", "distribution.csv"}};
  report["provenance"] = provenance(cfg, n, opts.seed);
  report["timestamp"] = timestamp_utc();
  write_json(opts.out_dir / "distribution.json", report);
  note(opts, "distribution: " + std::to_string(levels.size()) + " levels, " + std::to_string(jumps.size()) + " jumps");
  return report;
}

bool Verdict::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

Config config_from_report(const json& report) {
  if (!report.contains("config")) throw ConfigError("report.json: no embedded configuration");
  const fs::path base = report.contains("config_dir") ? fs::path(report["config_dir"].get<std::string>()) : fs::path{};
  return parse_config(report["config"], base);
}

void add(Verdict& v, std::string name, bool ok, std::string detail) {
  v.checks.push_back({std::move(name), ok, std::move(detail)});
}

Verdict verify_radial(const json& report, const RunOptions& opts) {
  Verdict v;
  const Config cfg = config_from_report(report);
  const Ball& ball = require_ball(cfg, "verify");
  const auto red = MaterialReduction::build(cfg.problem.materials, cfg.problem.constraint, cfg.problem.domain_measure());
  const double mu = cfg.problem.domain_measure();
  const std::size_t n_orig = cfg.problem.materials.size();

  // Independent flux and psi from the embedded sources.
  std::vector<radial::RadialFlux> fluxes;
  std::vector<double> weights;
  for (const auto& load : cfg.problem.loads) {
    fluxes.push_back(radial::radial_flux(std::get<PiecewisePoly>(load.source), ball.dimension, ball.radius));
    weights.push_back(load.weight);
  }
  const auto psi = radial::assemble_psi(fluxes, weights);

  // Design from the report.
  radial::RadialDesign design;
  design.dimension = ball.dimension;
  design.radius = ball.radius;
  for (const auto& b : report.at("bands")) {
    const auto theta = b.at("theta").get<std::vector<double>>();
    if (theta.size() != n_orig) throw ConfigError("report.json: band fractions do not match the materials");
    design.bands.push_back({b.at("r_lo").get<double>(), b.at("r_hi").get<double>(), reduce_row(red, theta)});
  }

  // 1. Bands partition [0, R] and rows lie in the simplex.
  {
    bool ok = !design.bands.empty() && design.bands.front().r_lo == 0.0 && design.bands.back().r_hi == ball.radius;
    double defect = 0.0;
    for (std::size_t k = 0; k < design.bands.size(); ++k) {
      const auto& b = design.bands[k];
      if (!(b.r_hi > b.r_lo)) ok = false;
      if (k > 0 && b.r_lo != design.bands[k - 1].r_hi) ok = false;
      double sum = 0.0;
      for (double t : b.theta) {
        defect = std::max(defect, -t);
        sum += t;
      }
      defect = std::max(defect, std::abs(sum - 1.0));
    }
    ok = ok && defect <= kSimplexTol;
    add(v, "bands_partition", ok, "simplex defect " + fmt(defect, 3));
  }

  // 2. Volumes per original material.
  {
    std::vector<double> vol(n_orig, 0.0);
    for (const auto& b : report.at("bands")) {
      const double shell = shell_volume(ball.dimension, b.at("r_lo").get<double>(), b.at("r_hi").get<double>());
      const auto theta = b.at("theta").get<std::vector<double>>();
      for (std::size_t i = 0; i < n_orig; ++i) vol[i] += shell * theta[i];
    }
    const auto q = red.effective_quantities();
    double worst = 0.0;
    for (std::size_t i = 0; i < n_orig; ++i) worst = std::max(worst, std::abs(vol[i] - q[i]) / mu);
    add(v, "volumes", worst <= 1e-10, "max |volume - q| / mu = " + fmt(worst, 3));
  }

  // 3. Strip conditions against the reported thresholds.
  {
    std::vector<double> alphas;
    for (const auto& t : report.at("thresholds")) alphas.push_back(t.at("alpha").get<double>());
    double max_psi = 0.0;
    for (double r : radial::sample_radii(design, psi, 512)) max_psi = std::max(max_psi, psi(r));
    const double tol = 1e-9 * std::max(max_psi, 1e-300);
    bool ok = alphas.size() == red.materials().size();
    double worst = 0.0;
    for (const auto& b : design.bands) {
      for (std::size_t g = 0; ok && g < b.theta.size(); ++g) {
        if (b.theta[g] <= 1e-12) continue;
        const double lo = alphas[g];
        const double hi = g == 0 ? std::numeric_limits<double>::infinity() : alphas[g - 1];
        for (int s = 0; s <= 16; ++s) {
          const double r = b.r_lo + (b.r_hi - b.r_lo) * s / 16.0;
          const double p = psi(r);
          const double excess = std::max(lo - p, p - hi);
          worst = std::max(worst, excess);
        }
      }
    }
    ok = ok && worst <= tol;
    add(v, "strip_conditions", ok, "max level excess " + fmt(std::max(worst, 0.0), 3));
  }

  // 4. Objective.
  {
    const double h = radial::radial_objective(design, psi, red.materials());
    const double reported = report.at("objective").get<double>();
    const double rel = std::abs(h - reported) / std::max(std::abs(h), 1e-300);
    add(v, "objective", rel <= 1e-9 || (h == 0.0 && reported == 0.0), "recomputed " + fmt(h, 15) + ", relative difference " + fmt(rel, 3));
  }

  // 5. State relation and saddle sampling.
  {
    radial::CertifyOptions copts;
    copts.seed = opts.seed;
    copts.saddle_samples = cfg.solver.saddle_samples;
    copts.residual_samples = cfg.solver.residual_samples;
    const auto cert = radial::certify(design, fluxes, psi, red.materials(), red.quantities(), copts);
    double worst = 0.0;
    for (double r : cert.state_residual) worst = std::max(worst, r);
    add(v, "state_relation", worst <= 1e-9 && cert.laminate_residual <= 1e-12, "max |sigma - lambda u'| = " + fmt(worst, 3));
    add(v, "saddle_sampling", cert.saddle_violations == 0,
        std::to_string(cert.saddle_samples) + " rearrangements, " + std::to_string(cert.saddle_violations) +
            " violations, max excess " + fmt(cert.saddle_max_excess, 3));
  }

  // 6. Curves.
  {
    const fs::path dir = opts.out_dir;
    const auto psi_csv = read_csv(dir / "psi.csv");
    double worst = 0.0;
    double scale = 0.0;
    for (const auto& row : psi_csv.rows) {
      worst = std::max(worst, std::abs(row[1] - psi(row[0])));
      scale = std::max(scale, std::abs(row[1]));
    }
    std::vector<double> rs;
    for (const auto& row : psi_csv.rows) rs.push_back(row[0]);
    bool has_all = true;
    for (double b : psi.psi.breakpoints()) has_all = has_all && std::find(rs.begin(), rs.end(), b) != rs.end();
    for (double b : design.interfaces()) has_all = has_all && std::find(rs.begin(), rs.end(), b) != rs.end();
    add(v, "psi_curve", worst <= 1e-12 * std::max(scale, 1e-300) && has_all,
        "max deviation " + fmt(worst, 3) + (has_all ? "" : ", missing breakpoints or interfaces"));

    const auto u_csv = read_csv(dir / "u.csv");
    double u_worst = 0.0;
    double u_scale = 0.0;
    std::vector<radial::RadialState> states;
    for (const auto& f : fluxes) states.push_back(radial::reconstruct_state(f, design, red.materials()));
    bool shape_ok = u_csv.header.size() == states.size() + 1;
    for (const auto& row : u_csv.rows) {
      for (std::size_t l = 0; shape_ok && l < states.size(); ++l) {
        u_worst = std::max(u_worst, std::abs(row[l + 1] - states[l](row[0])));
        u_scale = std::max(u_scale, std::abs(row[l + 1]));
      }
    }
    add(v, "state_curve", shape_ok && u_worst <= 1e-9 * std::max(u_scale, 1e-300), "max deviation " + fmt(u_worst, 3));
  }
  return v;
}

Verdict verify_grid(const json& report, const RunOptions& opts) {
  Verdict v;
  const Config cfg = config_from_report(report);
  GridSetup setup = build_grid_problem(cfg);
  const auto& g = *setup.grid;
  const auto& red = setup.reduction;
  const std::size_t n_orig = cfg.problem.materials.size();

  const FieldFile tf = read_field_binary(opts.out_dir / report.at("fields").at("theta").get<std::string>());
  if (tf.nx != g.nx() || tf.ny != g.ny() || tf.components != n_orig) {
    throw ConfigError("theta.bin: shape does not match the configuration");
  }
  std::vector<double> reduced_rows;
  double defect = 0.0;
  std::vector<double> vol(n_orig, 0.0);
  for (std::size_t k = 0; k < g.active_count(); ++k) {
    const std::size_t c = g.active_cells()[k];
    std::vector<double> row(n_orig);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_orig; ++i) {
      row[i] = tf.at(c, i);
      sum += row[i];
      defect = std::max(defect, -row[i]);
      vol[i] += g.measures()[k] * row[i];
    }
    defect = std::max(defect, std::abs(sum - 1.0));
    if (!std::isfinite(sum)) defect = std::numeric_limits<double>::infinity();
    const auto r = reduce_row(red, row);
    reduced_rows.insert(reduced_rows.end(), r.begin(), r.end());
  }
  add(v, "simplex", defect <= kSimplexTol, "max defect " + fmt(defect, 3));
  if (!(defect <= kSimplexTol)) return v;

  const double scale = g.total_measure() / cfg.problem.domain_measure();
  const auto q = red.effective_quantities();
  double worst = 0.0;
  for (std::size_t i = 0; i < n_orig; ++i) worst = std::max(worst, std::abs(vol[i] - q[i] * scale) / g.total_measure());
  add(v, "volumes", worst <= 1e-10, "max |volume - q| / mu = " + fmt(worst, 3));

  const DesignField theta(g.measures(), red.materials().size(), reduced_rows);
  grid::StateOptions sopts;
  sopts.cg.rel_tol = cfg.solver.cg_tol;
  const auto ev = saddle::evaluate(setup.problem, theta, sopts);
  const auto b = saddle::bounds(setup.problem, theta, ev.psi);
  const double lower = report.at("lower").get<double>();
  const double upper = report.at("upper").get<double>();
  const double dl = std::abs(b.lower - lower) / std::abs(b.lower);
  const double du = std::abs(b.upper - upper) / std::abs(b.upper);
  add(v, "bounds", dl <= 1e-6 && du <= 1e-6 && b.upper >= b.lower,
      "L " + fmt(b.lower) + " (reported " + fmt(lower) + "), U " + fmt(b.upper) + " (reported " + fmt(upper) + ")");
  const double rel_gap = (b.upper - b.lower) / std::abs(b.lower);
  add(v, "gap", rel_gap <= cfg.solver.tol_gap * 5.0 + 1e-12 || !report.at("converged").get<bool>(),
      "relative gap " + fmt(rel_gap, 3));

  const auto u_names = report.at("fields").at("u");
  double u_worst = 0.0;
  double u_scale = 0.0;
  for (std::size_t l = 0; l < u_names.size() && l < ev.u.size(); ++l) {
    const FieldFile uf = read_field_binary(opts.out_dir / u_names[l].get<std::string>());
    for (std::size_t c : g.active_cells()) {
      u_worst = std::max(u_worst, std::abs(uf.values[c] - ev.u[l][c]));
      u_scale = std::max(u_scale, std::abs(ev.u[l][c]));
    }
  }
  add(v, "state_fields", u_worst <= 1e-6 * std::max(u_scale, 1e-300), "max deviation " + fmt(u_worst, 3));
  return v;
}

}  // namespace

Verdict cmd_verify(const RunOptions& opts) {
  const fs::path path = opts.out_dir / "report.json";
  const json report = read_json(path);
  if (!report.contains("command")) throw ConfigError("report.json: missing command");
  const auto command = report["command"].get<std::string>();
  if (command == "radial") return verify_radial(report, opts);
  if (command == "grid") return verify_grid(report, opts);
  throw ConfigError("report.json: nothing to verify for command '" + command + "'");
}

int run_command(const CommandLine& cl, std::ostream& out, std::ostream& err) {
  try {
    RunOptions opts = cl.options;
    if (opts.log == nullptr) opts.log = &out;
    if (cl.command == "verify") {
      const Verdict verdict = cmd_verify(opts);
      for (const auto& c : verdict.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      }
      out << (verdict.passed() ? "verdict: pass" : "verdict: fail") << '\n';
      return verdict.passed() ? kExitOk : kExitVerifyFailed;
    }
    if (cl.config.empty()) throw ConfigError("--config: required for the " + cl.command + " command");
    const Config cfg = load_config(cl.config);
    if (cl.command == "radial") {
      const json report = cmd_radial(cfg, opts);
      for (double r : report["interfaces"]) out << "interface " << fmt(r, 12) << '\n';
    } else if (cl.command == "grid") {
      cmd_grid(cfg, opts);
    } else if (cl.command == "distribution") {
      cmd_distribution(cfg, opts);
    } else {
      throw ConfigError("unknown command '" + cl.command + "'");
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace bangbang::cli
