#pragma once

#include "pexfem/mesh.hpp"

namespace pexfem {

/// Coarse partition of the unit square into N x N elements nested in the
/// fine grid, with coarse-node neighborhoods, bilinear partition of unity,
/// parity 4-coloring, and on-demand oversampled patches.
///
/// Coarse elements are numbered row-major like fine cells; coarse nodes
/// row-major like fine nodes. All index sets are sorted ascending.
struct CoarseDecomposition {
  FineMesh mesh;
  int N = 0;              // coarse cells per side, H = 1/N
  int default_layers = 2; // oversampling default for basis construction

  double H() const { return 1.0 / N; }
  int m() const { return mesh.n / N; } // fine cells per coarse cell side
  int element_count() const { return N * N; }
  int coarse_node_count() const { return (N + 1) * (N + 1); }

  std::vector<std::vector<int>> element_cells;
  std::vector<std::vector<int>> element_nodes;

  // Neighborhood omega_i = union of coarse elements adjacent to coarse node i.
  std::vector<std::vector<int>> omega_cells;
  std::vector<std::vector<int>> omega_nodes;
  std::vector<std::vector<int>> omega_interior_nodes; // V_0(omega), excludes boundary of omega
  std::vector<char> coarse_interior; // per coarse node
  std::vector<int> color;            // per coarse node, parity of (ix,iy)

  SpMat chi; // node_count x coarse_node_count, bilinear coarse hats

  std::vector<int> interior_coarse_nodes() const;

  // K_i+ = K_i enlarged by `layers` rings of coarse elements, clipped to the
  // domain. Interior nodes exclude the patch boundary (and therefore the
  // domain boundary).
  std::vector<int> patch_elements(int element, int layers) const;
  std::vector<int> patch_cells(int element, int layers) const;
  std::vector<int> patch_nodes(int element, int layers) const;
  std::vector<int> patch_interior_nodes(int element, int layers) const;

  /// sum_i |grad chi_i|^2 evaluated at each fine-cell center.
  Vec pou_gradient_sq_per_cell() const;
};

CoarseDecomposition build_coarse_decomposition(const FineMesh& mesh, int N,
                                               int layers = 2);

} // namespace pexfem
