#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bangbang/cli/config.hpp"
#include "bangbang/measure_alloc.hpp"
#include "json.hpp"

namespace bangbang::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Resolved problem: domain, materials in input order with absolute
/// quantities, constraint mode, load weights and sources, and how the
/// materials were sorted, merged and reduced.
nlohmann::json echo_problem(const Config& cfg, const MaterialReduction& reduction);

nlohmann::json provenance(const Config& cfg, int samples, std::uint64_t seed);

/// Current UTC time, ISO 8601.
std::string timestamp_utc();

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// Comma-separated table with a header line; numbers at full precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

/// Labels of the original materials belonging to each reduced material.
std::vector<std::vector<std::string>> group_labels(const Config& cfg, const MaterialReduction& reduction);

}  // namespace bangbang::cli
