#pragma once

// Grid field files.
//
// Binary layout (little-endian, as written by the host):
//   8 bytes   magic "BBFIELD1"
//   uint64    nx
//   uint64    ny
//   float64   h
//   uint64    components
//   float64   values[ny][nx][components]   row-major, x fastest; NaN outside the mask
//
// CSV layout: header "x,y,<name_1>,...,<name_k>", one line per in-domain
// cell centre.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bangbang/grid.hpp"

namespace bangbang::cli {

struct FieldFile {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double h = 0.0;
  std::size_t components = 1;
  std::vector<double> values;  // nx * ny * components

  [[nodiscard]] double at(std::size_t cell, std::size_t component) const {
    return values[cell * components + component];
  }
};

void write_field_binary(const std::filesystem::path& path, const FieldFile& field);
FieldFile read_field_binary(const std::filesystem::path& path);

void write_field_csv(const std::filesystem::path& path, const grid::Grid2D& grid, const FieldFile& field,
                     std::span<const std::string> names);

/// Per-active-cell rows (components values each) spread onto the full grid,
/// NaN outside the mask.
FieldFile field_from_active(const grid::Grid2D& grid, std::size_t components, std::span<const double> rows);
/// A full-grid scalar field, NaN outside the mask.
FieldFile field_from_grid(const grid::Grid2D& grid, std::span<const double> values);

/// A source for `grid` from a binary field (.bin, one component, same nx/ny)
/// or a CSV file with x,y,value lines mapped to the containing cells.
grid::Field load_source_field(const std::filesystem::path& path, const grid::Grid2D& grid);

}  // namespace bangbang::cli
