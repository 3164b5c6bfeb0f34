#pragma once

#include <vector>

#include "pexfem/fields.hpp"
#include "pexfem/mesh.hpp"

namespace pexfem {

/// Sparse symmetric operator over fine dofs (or a reduced index set).
/// Assembled matrices keep Dirichlet rows/cols; elimination happens by
/// extracting the interior submatrix.
struct SymOperator {
  SpMat mat;

  Eigen::Index size() const { return mat.rows(); }
  Vec apply(const Vec& x) const { return mat * x; }
  Mat dense() const { return Mat(mat); }

  /// Principal submatrix on a sorted index set.
  SpMat submatrix(const std::vector<int>& idx) const;

  /// Relative Frobenius asymmetry ||A - A^T||_F / ||A||_F.
  double asymmetry() const;
};

enum class NormKind { Mass, Energy };

// Q1 element matrices on a square cell of side h, nodes counterclockwise.
Mat element_stiffness(double kappa);
Mat element_mass(double weight, double h);

SymOperator assemble_stiffness(const FineMesh& mesh, const CellField& kappa);
SymOperator assemble_mass(const FineMesh& mesh);
SymOperator assemble_weighted_mass(const FineMesh& mesh, const CellField& w);

/// Assembles the restriction of a bilinear form to a subdomain: only the
/// listed cells are integrated, and rows/cols are the local positions of
/// `nodes` (sorted ascending). Used by element/neighborhood problems where
/// the integral runs over the subdomain only.
Mat assemble_local(const FineMesh& mesh, const std::vector<int>& cells,
                   const std::vector<int>& nodes, const CellField& weight,
                   bool stiffness);

Vec assemble_load_constant(const FineMesh& mesh, double c);
Vec assemble_load_point(const FineMesh& mesh, int node, double strength);
Vec assemble_load_grid(const FineMesh& mesh, const CellField& f);

/// sqrt(u' Op u); throws NumericError if the quadratic form is negative
/// beyond rounding.
double operator_norm(const SymOperator& op, const Vec& u);

struct SolveOptions {
  double rel_tol = 1e-10;
  int dense_cutoff = 2000; // below this, use a dense Cholesky
};

/// SPD solve with ||op x - rhs|| <= tol ||rhs||. Dense Cholesky for small
/// systems, diagonally preconditioned CG otherwise (iteration cap 10*dofs).
Vec solve_spd(const SpMat& op, const Vec& rhs, const SolveOptions& opts = {});

// Gather/scatter between full vectors and a sorted index subset.
Vec gather(const Vec& full, const std::vector<int>& idx);
void scatter_add(Vec& full, const std::vector<int>& idx, const Vec& part);

} // namespace pexfem
