#include "bangbang/cli/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "bangbang/cli/config.hpp"

namespace bangbang::cli {

namespace {

constexpr char kMagic[8] = {'B', 'B', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ConfigError(path.string() + ": truncated field file");
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void write_field_binary(const std::filesystem::path& path, const FieldFile& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write");
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, field.nx);
  put<std::uint64_t>(out, field.ny);
  put<double>(out, field.h);
  put<std::uint64_t>(out, field.components);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

FieldFile read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open field file");
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError(path.string() + ": not a BBFIELD1 file");
  }
  FieldFile f;
  f.nx = get<std::uint64_t>(in, path);
  f.ny = get<std::uint64_t>(in, path);
  f.h = get<double>(in, path);
  f.components = get<std::uint64_t>(in, path);
  const std::size_t n = f.nx * f.ny * f.components;
  if (n == 0 || n > (std::size_t{1} << 32)) throw ConfigError(path.string() + ": implausible field size");
  f.values.resize(n);
  if (!in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
    throw ConfigError(path.string() + ": truncated field file");
  }
  return f;
}

void write_field_csv(const std::filesystem::path& path, const grid::Grid2D& grid, const FieldFile& field,
                     std::span<const std::string> names) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write");
  out << "x,y";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t c : grid.active_cells()) {
    out << fmt(grid.x(c)) << ',' << fmt(grid.y(c));
    for (std::size_t k = 0; k < field.components; ++k) out << ',' << fmt(field.at(c, k));
    out << '\n';
  }
}

FieldFile field_from_active(const grid::Grid2D& grid, std::size_t components, std::span<const double> rows) {
  FieldFile f{grid.nx(), grid.ny(), grid.h(), components,
              std::vector<double>(grid.size() * components, std::numeric_limits<double>::quiet_NaN())};
  for (std::size_t k = 0; k < grid.active_count(); ++k) {
    const std::size_t c = grid.active_cells()[k];
    for (std::size_t j = 0; j < components; ++j) f.values[c * components + j] = rows[k * components + j];
  }
  return f;
}

FieldFile field_from_grid(const grid::Grid2D& grid, std::span<const double> values) {
  FieldFile f{grid.nx(), grid.ny(), grid.h(), 1,
              std::vector<double>(grid.size(), std::numeric_limits<double>::quiet_NaN())};
  for (std::size_t c : grid.active_cells()) f.values[c] = values[c];
  return f;
}

grid::Field load_source_field(const std::filesystem::path& path, const grid::Grid2D& grid) {
  grid::Field out(grid.size(), 0.0);
  if (path.extension() == ".csv") {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open source field");
    std::string line;
    std::getline(in, line);  // header
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream ls(line);
      double x = 0.0, y = 0.0, v = 0.0;
      char c1 = 0, c2 = 0;
      if (!(ls >> x >> c1 >> y >> c2 >> v) || c1 != ',' || c2 != ',') {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected x,y,value");
      }
      const auto i = static_cast<long long>(std::floor(x / grid.h()));
      const auto j = static_cast<long long>(std::floor(y / grid.h()));
      if (i < 0 || j < 0 || i >= static_cast<long long>(grid.nx()) || j >= static_cast<long long>(grid.ny())) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": point outside the grid");
      }
      out[static_cast<std::size_t>(j) * grid.nx() + static_cast<std::size_t>(i)] = v;
    }
  } else {
    const FieldFile f = read_field_binary(path);
    if (f.nx != grid.nx() || f.ny != grid.ny() || f.components != 1) {
      throw ConfigError(path.string() + ": source field must be a single component on a " + std::to_string(grid.nx()) +
                        " x " + std::to_string(grid.ny()) + " grid");
    }
    for (std::size_t c : grid.active_cells()) out[c] = f.values[c];
  }
  for (std::size_t c : grid.active_cells()) {
    if (!std::isfinite(out[c])) throw ConfigError(path.string() + ": non-finite source value inside the domain");
  }
  return out;
}

}  // namespace bangbang::cli
