#include "pexfem/constants.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

namespace pexfem {

namespace {

Mat normalized_columns(const Mat& cols, const SymOperator& M) {
  Mat out = cols;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double nrm = std::sqrt(std::max(out.col(c).dot(M.mat * out.col(c)), 0.0));
    if (nrm == 0.0)
      throw NumericError("subspace basis contains a zero column");
    out.col(c) /= nrm;
  }
  return out;
}

// G^{-1/2} with a conditioning guard (Gram condition number < 1e12).
Mat inv_sqrt(const Mat& G, const char* who) {
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  if (es.info() != Eigen::Success)
    throw NumericError(std::string(who) + ": Gram eigendecomposition failed");
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 1e-12 * lmax))
    throw NumericError(std::string(who) +
                       ": Gram matrix numerically rank deficient (cond > 1e12)");
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

double gamma_between(const Mat& cols1, const Mat& cols2, const SymOperator& M,
                     bool* overlap) {
  if (cols1.cols() == 0 || cols2.cols() == 0) {
    if (overlap)
      *overlap = false;
    return 0.0;
  }
  const Mat W1 = normalized_columns(cols1, M);
  const Mat W2 = normalized_columns(cols2, M);
  const Mat MW2 = M.mat * W2;
  const Mat G1 = W1.transpose() * (M.mat * W1);
  const Mat G2 = W2.transpose() * MW2;
  const Mat B = W1.transpose() * MW2;

  if (overlap) {
    Mat J(G1.rows() + G2.rows(), G1.cols() + G2.cols());
    J << G1, B, B.transpose(), G2;
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    *overlap = !(es.eigenvalues().minCoeff() >
                 1e-12 * es.eigenvalues().maxCoeff());
  }

  const Mat T = inv_sqrt(G1, "gamma") * B * inv_sqrt(G2, "gamma");
  Eigen::JacobiSVD<Mat> svd(T);
  const double g = svd.singularValues()[0];
  return std::min(g, 1.0);
}

} // namespace

double compute_gamma(const SubspaceBasis& V1, const SubspaceBasis& V2,
                     const SymOperator& M, bool* overlap) {
  return gamma_between(V1.cols, V2.cols, M, overlap);
}

int prune_dependent_columns(SubspaceBasis& basis, const SymOperator& M,
                            double tol) {
  const int k = basis.size();
  if (k == 0)
    return 0;
  const Mat W = normalized_columns(basis.cols, M);
  Mat G = W.transpose() * (M.mat * W);

  // Pivoted Cholesky: the pivot is the squared distance of a column from the
  // span of the columns already kept (unit columns, so it starts at 1).
  std::vector<int> kept;
  std::vector<char> used(k, 0);
  Vec diag = G.diagonal();
  Mat L = Mat::Zero(k, k); // rows of eliminated factors
  for (int t = 0; t < k; ++t) {
    int p = -1;
    double best = tol;
    for (int i = 0; i < k; ++i)
      if (!used[i] && diag[i] > best) {
        best = diag[i];
        p = i;
      }
    if (p < 0)
      break;
    used[p] = 1;
    kept.push_back(p);
    const double piv = std::sqrt(diag[p]);
    Vec col = G.col(p);
    for (int s = 0; s + 1 < static_cast<int>(kept.size()); ++s)
      col -= L.row(s)[p] * L.row(s).transpose();
    L.row(static_cast<int>(kept.size()) - 1) = col.transpose() / piv;
    for (int i = 0; i < k; ++i)
      if (!used[i])
        diag[i] -= L(static_cast<int>(kept.size()) - 1, i) *
                   L(static_cast<int>(kept.size()) - 1, i);
  }
  if (static_cast<int>(kept.size()) == k)
    return 0;

  std::sort(kept.begin(), kept.end());
  Mat cols(basis.cols.rows(), kept.size());
  std::vector<BasisColumnInfo> info;
  for (size_t i = 0; i < kept.size(); ++i) {
    cols.col(i) = basis.cols.col(kept[i]);
    info.push_back(basis.info[kept[i]]);
  }
  const int removed = k - static_cast<int>(kept.size());
  basis.cols = std::move(cols);
  basis.info = std::move(info);
  return removed;
}

int basis_color(const SubspaceBasis& V2, const CoarseDecomposition& decomp,
                int column) {
  const int owner = V2.info[column].owner;
  if (V2.tag == SpaceTag::V2First)
    return decomp.color[owner]; // owner is a coarse node
  const int ex = owner % decomp.N, ey = owner / decomp.N;
  return (ex % 2) + 2 * (ey % 2); // owner is a coarse element
}

namespace {

std::array<std::vector<int>, 4> columns_by_color(
    const SubspaceBasis& V2, const CoarseDecomposition& decomp) {
  std::array<std::vector<int>, 4> groups;
  for (int c = 0; c < V2.size(); ++c)
    groups[basis_color(V2, decomp, c)].push_back(c);
  return groups;
}

Mat select_columns(const Mat& cols, const std::vector<int>& idx) {
  Mat out(cols.rows(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    out.col(i) = cols.col(idx[i]);
  return out;
}

} // namespace

double compute_beta(const SubspaceBasis& V2, const CoarseDecomposition& decomp,
                    const SymOperator& M) {
  const auto groups = columns_by_color(V2, decomp);
  int nonempty = 0;
  for (const auto& g : groups)
    if (!g.empty())
      ++nonempty;
  if (nonempty < 2)
    throw ConfigError("beta: need at least two nonempty colors");
  double beta = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      if (groups[a].empty() || groups[b].empty())
        continue;
      beta = std::max(beta, gamma_between(select_columns(V2.cols, groups[a]),
                                          select_columns(V2.cols, groups[b]),
                                          M, nullptr));
    }
  return beta;
}

namespace {

double supG_of_columns(const Mat& cols, const SymOperator& A,
                       const SymOperator& M, double H) {
  const Mat W = normalized_columns(cols, M);
  const Mat Ar = W.transpose() * (A.mat * W);
  const Mat Mr = (1.0 / (H * H)) * (W.transpose() * (M.mat * W));
  Eigen::SelfAdjointEigenSolver<Mat> cond(Mr);
  if (!(cond.eigenvalues().minCoeff() > 1e-12 * cond.eigenvalues().maxCoeff()))
    throw NumericError("supG: Gram matrix numerically rank deficient");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Ar, Mr);
  if (es.info() != Eigen::Success)
    throw NumericError("supG: generalized eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

} // namespace

double compute_supG(const SubspaceBasis& V, const SymOperator& A,
                    const SymOperator& M, double H) {
  if (V.size() == 0)
    throw ConfigError("supG: basis is empty");
  return supG_of_columns(V.cols, A, M, H);
}

std::array<double, 4> compute_supG_per_color(const SubspaceBasis& V2,
                                             const CoarseDecomposition& decomp,
                                             const SymOperator& A,
                                             const SymOperator& M) {
  const auto groups = columns_by_color(V2, decomp);
  std::array<double, 4> out{0, 0, 0, 0};
  for (int c = 0; c < 4; ++c)
    if (!groups[c].empty())
      out[c] = supG_of_columns(select_columns(V2.cols, groups[c]), A, M,
                               decomp.H());
  return out;
}

double recommend_tau(const ConstantsReport& report, double omega, double H,
                     TauMode mode) {
  if (!(omega >= 0.0 && omega <= 1.0))
    throw ConfigError("recommend_tau: omega must lie in [0,1]");
  if (!(report.gamma < 1.0))
    throw NumericError("recommend_tau: gamma >= 1, split infeasible");
  const double Hinv2 = 1.0 / (H * H);
  const double one_minus_g2 = 1.0 - report.gamma * report.gamma;
  if (mode == TauMode::Thm32)
    return one_minus_g2 / ((2.0 - omega) * report.supG_V2 * Hinv2);
  const double max_color =
      *std::max_element(report.supG_color.begin(), report.supG_color.end());
  const double one_minus_b2 = 1.0 - report.beta * report.beta;
  return (1.0 / 16.0) * one_minus_g2 * one_minus_b2 * one_minus_b2 /
         ((2.0 - omega) * max_color * Hinv2);
}

ConstantsReport build_constants_report(const FineSystem& sys,
                                       const CoarseDecomposition& decomp,
                                       const SubspaceBasis& V1,
                                       const SubspaceBasis& V2,
                                       const std::vector<double>& tails,
                                       int shortfall, double omega) {
  ConstantsReport rep;
  rep.contrast = sys.kappa.contrast();
  rep.H = decomp.H();
  rep.gamma = compute_gamma(V1, V2, sys.M);
  rep.beta = compute_beta(V2, decomp, sys.M);
  rep.supG_V1 = compute_supG(V1, sys.A, sys.M, decomp.H());
  rep.supG_V2 = compute_supG(V2, sys.A, sys.M, decomp.H());
  rep.supG_color = compute_supG_per_color(V2, decomp, sys.A, sys.M);
  rep.max_tail = 0.0;
  for (double t : tails)
    if (std::isfinite(t))
      rep.max_tail = std::max(rep.max_tail, t);
  rep.shortfall = shortfall;
  rep.tau_thm32 = recommend_tau(rep, omega, decomp.H(), TauMode::Thm32);
  rep.tau_thm33 = recommend_tau(rep, omega, decomp.H(), TauMode::Thm33);
  return rep;
}

} // namespace pexfem
