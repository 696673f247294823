#include "bangbang/cli/report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace bangbang::cli {

using nlohmann::json;

namespace {

json pieces_json(const PiecewisePoly& p) {
  json out = json::array();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& piece = p.piece(k);
    json c = json::array();
    for (double v : piece.coeffs()) c.push_back(v);
    out.push_back({{"r_lo", p.breakpoints()[k]},
                   {"r_hi", p.breakpoints()[k + 1]},
                   {"lowest_power", piece.is_zero() ? 0 : piece.lowest()},
                   {"coefficients", c}});
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> group_labels(const Config& cfg, const MaterialReduction& reduction) {
  std::vector<std::vector<std::string>> out(reduction.materials().size());
  for (std::size_t i = 0; i < reduction.original_count(); ++i) {
    const std::size_t g = reduction.reduced_index(i);
    if (g != MaterialReduction::npos) out[g].push_back(cfg.problem.materials[i].label);
  }
  return out;
}

json echo_problem(const Config& cfg, const MaterialReduction& reduction) {
  json doc;
  json dom = {{"kind", to_string(cfg.kind)}, {"measure", cfg.problem.domain_measure()}};
  if (const auto* b = std::get_if<Ball>(&cfg.problem.domain)) {
    dom["dimension"] = b->dimension;
    dom["radius"] = b->radius;
  } else {
    const auto& r = std::get<Rectangle>(cfg.problem.domain);
    dom["dimension"] = 2;
    dom["width"] = r.width;
    dom["height"] = r.height;
  }
  doc["domain"] = dom;

  const auto effective = reduction.effective_quantities();
  json mats = json::array();
  for (std::size_t i = 0; i < cfg.problem.materials.size(); ++i) {
    const auto& m = cfg.problem.materials[i];
    const std::size_t g = reduction.reduced_index(i);
    mats.push_back({{"label", m.label},
                    {"lambda_min", m.lambda_min},
                    {"lambda_max", m.lambda_max},
                    {"quantity", cfg.problem.constraint.quantities[i]},
                    {"effective_quantity", effective[i]},
                    {"reduced_index", g == MaterialReduction::npos ? json(nullptr) : json(g)}});
  }
  doc["materials"] = mats;
  doc["constraint_mode"] = cfg.problem.constraint.mode == ConstraintMode::Exact ? "exact" : "upper";
  doc["quantities_from_fractions"] = cfg.fractions;

  json loads = json::array();
  for (std::size_t l = 0; l < cfg.problem.loads.size(); ++l) {
    const auto& lc = cfg.problem.loads[l];
    json entry = {{"weight", lc.weight}};
    if (const auto* p = std::get_if<PiecewisePoly>(&lc.source)) {
      entry["pieces"] = pieces_json(*p);
    } else {
      entry["grid_file"] = cfg.grid_files[l];
    }
    loads.push_back(entry);
  }
  doc["loads"] = loads;

  json reduced = json::array();
  const auto labels = group_labels(cfg, reduction);
  for (std::size_t g = 0; g < reduction.materials().size(); ++g) {
    reduced.push_back({{"members", labels[g]},
                       {"lambda_min", reduction.materials()[g].lambda_min},
                       {"quantity", reduction.quantities()[g]}});
  }
  doc["reduced_materials"] = reduced;
  return doc;
}

json provenance(const Config& cfg, int samples, std::uint64_t seed) {
  return {{"tool", "bangbang"},
          {"version", kToolVersion},
          {"config_hash", "fnv1a64:" + cfg.hash},
          {"samples", samples},
          {"seed", seed}};
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write");
  out << doc.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write");
  out.precision(17);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << '\n';
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ": non-numeric entry '" + cell + "'");
      }
    }
    if (row.size() != t.header.size()) throw ConfigError(path.string() + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace bangbang::cli
