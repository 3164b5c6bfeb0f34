#include "pexfem/saddle.hpp"

namespace pexfem {

SpMat restrict_cols(const SpMat& C, const std::vector<int>& dofs,
                    int original_cols) {
  std::vector<int> local_of(original_cols, -1);
  for (size_t i = 0; i < dofs.size(); ++i)
    local_of[dofs[i]] = static_cast<int>(i);
  std::vector<Triplet> trips;
  for (int col = 0; col < C.outerSize(); ++col) {
    const int lc = local_of[col];
    if (lc < 0)
      continue;
    for (SpMat::InnerIterator it(C, col); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), lc, it.value());
  }
  SpMat out(C.rows(), dofs.size());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

SaddleSolver::SaddleSolver(const SpMat& A, const SpMat& C)
    : nx_(A.rows()), nc_(C.rows()) {
  std::vector<Triplet> trips;
  trips.reserve(A.nonZeros() + 2 * C.nonZeros());
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), col, it.value());
  for (int col = 0; col < C.outerSize(); ++col)
    for (SpMat::InnerIterator it(C, col); it; ++it) {
      trips.emplace_back(static_cast<int>(nx_ + it.row()), col, it.value());
      trips.emplace_back(col, static_cast<int>(nx_ + it.row()), it.value());
    }
  K_.resize(nx_ + nc_, nx_ + nc_);
  K_.setFromTriplets(trips.begin(), trips.end());
  K_.makeCompressed();
  lu_.compute(K_);
  if (lu_.info() != Eigen::Success)
    throw NumericError("saddle solver: bordered factorization failed "
                       "(singular constraint block?)");
}

Vec SaddleSolver::solve(const Vec& f, const Vec& g, double rel_tol,
                        Vec* mu_out) const {
  Vec rhs(nx_ + nc_);
  rhs.head(nx_) = f;
  rhs.tail(nc_) = g;
  const Vec sol = lu_.solve(rhs);
  const double res = (K_ * sol - rhs).norm();
  const double scale = std::max({rhs.norm(), sol.norm(), 1e-300});
  if (!(res <= rel_tol * scale))
    throw NumericError("saddle solver: residual " + std::to_string(res) +
                       " too large for rhs scale " + std::to_string(scale));
  if (mu_out)
    *mu_out = sol.tail(nc_);
  return sol.head(nx_);
}

} // namespace pexfem
