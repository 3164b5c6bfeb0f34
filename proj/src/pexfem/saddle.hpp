#pragma once

#include <Eigen/SparseLU>

#include "pexfem/errors.hpp"
#include "pexfem/types.hpp"

namespace pexfem {

/// Select columns of a sparse matrix by a sorted global index list.
SpMat restrict_cols(const SpMat& C, const std::vector<int>& dofs,
                    int original_cols);

/// Factors the bordered system [[A, C'],[C, 0]] once and solves for many
/// right-hand sides. A is symmetric over the patch dofs, C holds the
/// constraint rows over the same dofs.
class SaddleSolver {
public:
  SaddleSolver(const SpMat& A, const SpMat& C);

  /// Solves A x + C' mu = f, C x = g. Throws NumericError when the residual
  /// exceeds `rel_tol` times the data scale.
  Vec solve(const Vec& f, const Vec& g, double rel_tol = 1e-8,
            Vec* mu_out = nullptr) const;

  Eigen::Index primal_size() const { return nx_; }
  Eigen::Index constraint_count() const { return nc_; }

private:
  Eigen::Index nx_ = 0, nc_ = 0;
  SpMat K_;
  Eigen::SparseLU<SpMat> lu_;
};

} // namespace pexfem
