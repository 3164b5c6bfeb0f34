#pragma once

#include <cstdint>
#include <string>

#include "pexfem/mesh.hpp"

namespace pexfem {

/// One scalar per fine cell (piecewise-constant diffusivity or source
/// density), row-major cell ordering matching FineMesh.
struct CellField {
  int n = 0; // cells per side
  Vec values;

  double contrast() const { return values.maxCoeff() / values.minCoeff(); }
  double operator()(int cell) const { return values[cell]; }
};

CellField make_constant_field(const FineMesh& mesh, double value);

/// Validates positivity and size; every constructor path goes through this.
CellField make_cell_field(int n, Vec values);

/// Grid file: first line "nx ny", then nx*ny whitespace-separated positive
/// floats, row-major, cell-centered on the fine grid.
CellField load_cell_field(const std::string& path, int expected_n);
void save_cell_field(const CellField& field, const std::string& path);

/// Background field with randomly placed high-value streak segments
/// (1 cell thick, 10-40 cells long, horizontal or vertical). Streak count
/// scales with `density`; identical seed gives an identical field.
CellField generate_streak_field(int n, double background, double streak_value,
                                std::uint64_t seed, double density = 0.15);

} // namespace pexfem
