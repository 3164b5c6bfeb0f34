#include "pexfem/assemble.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>

namespace pexfem {

Mat element_stiffness(double kappa) {
  Mat k(4, 4);
  // Exact integrals of bilinear shape gradients on a square; h cancels in 2D.
  k << 4, -1, -2, -1, //
      -1, 4, -1, -2,  //
      -2, -1, 4, -1,  //
      -1, -2, -1, 4;
  return (kappa / 6.0) * k;
}

Mat element_mass(double weight, double h) {
  Mat m(4, 4);
  m << 4, 2, 1, 2, //
      2, 4, 2, 1,  //
      1, 2, 4, 2,  //
      2, 1, 2, 4;
  return (weight * h * h / 36.0) * m;
}

namespace {

SymOperator assemble_global(const FineMesh& mesh, const CellField* weight,
                            bool stiffness) {
  if (weight && weight->n != mesh.n)
    throw ConfigError("assembly: field has " + std::to_string(weight->n) +
                      " cells per side, mesh has " + std::to_string(mesh.n));
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.cell_count()) * 16);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const double w = weight ? (*weight)(c) : 1.0;
    const Mat ke = stiffness ? element_stiffness(w) : element_mass(w, mesh.h());
    const auto nodes = mesh.cell_nodes(c);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        trips.emplace_back(nodes[a], nodes[b], ke(a, b));
  }
  SymOperator op;
  op.mat.resize(mesh.node_count(), mesh.node_count());
  op.mat.setFromTriplets(trips.begin(), trips.end());
  op.mat.makeCompressed();
  return op;
}

} // namespace

SymOperator assemble_stiffness(const FineMesh& mesh, const CellField& kappa) {
  return assemble_global(mesh, &kappa, true);
}

SymOperator assemble_mass(const FineMesh& mesh) {
  return assemble_global(mesh, nullptr, false);
}

SymOperator assemble_weighted_mass(const FineMesh& mesh, const CellField& w) {
  return assemble_global(mesh, &w, false);
}

Mat assemble_local(const FineMesh& mesh, const std::vector<int>& cells,
                   const std::vector<int>& nodes, const CellField& weight,
                   bool stiffness) {
  std::vector<int> local_of(mesh.node_count(), -1);
  for (size_t i = 0; i < nodes.size(); ++i)
    local_of[nodes[i]] = static_cast<int>(i);
  Mat out = Mat::Zero(nodes.size(), nodes.size());
  for (int c : cells) {
    const double w = weight(c);
    const Mat ke = stiffness ? element_stiffness(w) : element_mass(w, mesh.h());
    const auto cn = mesh.cell_nodes(c);
    for (int a = 0; a < 4; ++a) {
      const int la = local_of[cn[a]];
      if (la < 0)
        continue;
      for (int b = 0; b < 4; ++b) {
        const int lb = local_of[cn[b]];
        if (lb >= 0)
          out(la, lb) += ke(a, b);
      }
    }
  }
  return out;
}

Vec assemble_load_constant(const FineMesh& mesh, double c) {
  Vec f = Vec::Zero(mesh.node_count());
  const double per_node = c * mesh.h() * mesh.h() / 4.0;
  for (int cell = 0; cell < mesh.cell_count(); ++cell)
    for (int v : mesh.cell_nodes(cell))
      f[v] += per_node;
  return f;
}

Vec assemble_load_point(const FineMesh& mesh, int node, double strength) {
  if (node < 0 || node >= mesh.node_count() || mesh.is_boundary_node(node))
    throw ConfigError("point source node " + std::to_string(node) +
                      " is not an interior node");
  Vec f = Vec::Zero(mesh.node_count());
  f[node] = strength;
  return f;
}

Vec assemble_load_grid(const FineMesh& mesh, const CellField& f) {
  if (f.n != mesh.n)
    throw ConfigError("load grid does not match mesh size");
  Vec out = Vec::Zero(mesh.node_count());
  const double quarter = mesh.h() * mesh.h() / 4.0;
  for (int cell = 0; cell < mesh.cell_count(); ++cell)
    for (int v : mesh.cell_nodes(cell))
      out[v] += f(cell) * quarter;
  return out;
}

SpMat SymOperator::submatrix(const std::vector<int>& idx) const {
  std::vector<int> local_of(mat.rows(), -1);
  for (size_t i = 0; i < idx.size(); ++i)
    local_of[idx[i]] = static_cast<int>(i);
  std::vector<Triplet> trips;
  for (int col = 0; col < mat.outerSize(); ++col) {
    const int lc = local_of[col];
    if (lc < 0)
      continue;
    for (SpMat::InnerIterator it(mat, col); it; ++it) {
      const int lr = local_of[it.row()];
      if (lr >= 0)
        trips.emplace_back(lr, lc, it.value());
    }
  }
  SpMat out(idx.size(), idx.size());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

double SymOperator::asymmetry() const {
  const SpMat diff = SpMat(mat.transpose()) - mat;
  const double denom = mat.norm();
  return denom == 0.0 ? 0.0 : diff.norm() / denom;
}

double operator_norm(const SymOperator& op, const Vec& u) {
  if (u.size() != op.size())
    throw ConfigError("norm: vector length does not match operator");
  const double q = u.dot(op.mat * u);
  const double scale = std::max(1.0, u.squaredNorm());
  if (q < -1e-12 * scale)
    throw NumericError("norm: quadratic form is negative (" +
                       std::to_string(q) + "); operator not PSD");
  return std::sqrt(std::max(q, 0.0));
}

Vec solve_spd(const SpMat& op, const Vec& rhs, const SolveOptions& opts) {
  if (op.rows() != rhs.size())
    throw ConfigError("solve_spd: dimension mismatch");
  if (rhs.size() == 0)
    return Vec();
  if (!(opts.rel_tol > 0.0) || opts.rel_tol > 1e-6)
    throw ConfigError("solve_spd: tol must be in (0, 1e-6]");
  if (op.rows() < opts.dense_cutoff) {
    const Mat dense(op);
    Eigen::LLT<Mat> llt(dense);
    if (llt.info() == Eigen::Success) {
      Vec x = llt.solve(rhs);
      const double res = (op * x - rhs).norm();
      if (res <= opts.rel_tol * std::max(rhs.norm(), 1e-300))
        return x;
    }
    // fall through to CG if Cholesky failed or lost too much accuracy
  }
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(opts.rel_tol);
  cg.setMaxIterations(10 * op.rows());
  cg.compute(op);
  Vec x = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw NumericError("solve_spd: CG did not converge, final residual " +
                       std::to_string(cg.error()));
  return x;
}

Vec gather(const Vec& full, const std::vector<int>& idx) {
  Vec out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    out[i] = full[idx[i]];
  return out;
}

void scatter_add(Vec& full, const std::vector<int>& idx, const Vec& part) {
  for (size_t i = 0; i < idx.size(); ++i)
    full[idx[i]] += part[i];
}

} // namespace pexfem
