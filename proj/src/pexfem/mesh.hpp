#pragma once

#include <array>
#include <vector>

#include "pexfem/errors.hpp"
#include "pexfem/types.hpp"

namespace pexfem {

/// Uniform n x n quad grid on the unit square with row-major node numbering
/// (x fastest). Node (ix,iy) has index iy*(n+1)+ix; cell (cx,cy) has index
/// cy*n+cx and its four nodes are listed counterclockwise from the lower-left
/// corner.
struct FineMesh {
  int n = 0; // cells per side, h = 1/n

  double h() const { return 1.0 / n; }
  int node_count() const { return (n + 1) * (n + 1); }
  int cell_count() const { return n * n; }

  int node_index(int ix, int iy) const { return iy * (n + 1) + ix; }
  int cell_index(int cx, int cy) const { return cy * n + cx; }

  std::array<int, 4> cell_nodes(int c) const {
    const int cx = c % n, cy = c / n;
    return {node_index(cx, cy), node_index(cx + 1, cy),
            node_index(cx + 1, cy + 1), node_index(cx, cy + 1)};
  }

  Eigen::Vector2d node_coord(int v) const {
    const int ix = v % (n + 1), iy = v / (n + 1);
    return {ix * h(), iy * h()};
  }

  bool is_boundary_node(int v) const {
    const int ix = v % (n + 1), iy = v / (n + 1);
    return ix == 0 || iy == 0 || ix == n || iy == n;
  }

  std::vector<char> boundary_mask() const;
  std::vector<int> interior_nodes() const;
  int boundary_node_count() const { return 4 * n; }
};

FineMesh build_fine_mesh(int n);

} // namespace pexfem
