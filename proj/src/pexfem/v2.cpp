#include "pexfem/v2.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <memory>

#include "pexfem/saddle.hpp"

namespace pexfem {

namespace {

struct ConstrainedEigs {
  Vec values;  // ascending, kept modes
  Mat vectors; // (dofs) x kept
  double tail = std::numeric_limits<double>::infinity();
  int available = 0;
};

// Smallest eigenpairs of A x = lambda B x on the kernel of C; rows of C are
// scale-normalized before the rank decision so huge-contrast weights do not
// skew it. The kernel basis comes from a column-pivoted QR of C'.
ConstrainedEigs constrained_eigs(const Mat& A, const Mat& B, Mat C, int count,
                                 const std::string& who) {
  for (Eigen::Index r = 0; r < C.rows(); ++r) {
    const double s = C.row(r).norm();
    if (s > 0)
      C.row(r) /= s;
  }
  const Eigen::Index nc = C.rows(), nd = C.cols();
  Eigen::ColPivHouseholderQR<Mat> qr(C.transpose());
  qr.setThreshold(1e-12);
  const Eigen::Index rank = qr.rank();
  if (rank < nc)
    throw NumericError(who + ": constraint matrix is rank deficient (" +
                       std::to_string(rank) + " of " + std::to_string(nc) +
                       ")");
  const Mat Q = qr.householderQ() * Mat::Identity(nd, nd);
  const Mat Z = Q.rightCols(nd - rank);

  const Mat Ar = Z.transpose() * A * Z;
  const Mat Br = Z.transpose() * B * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Ar, Br);
  if (es.info() != Eigen::Success)
    throw NumericError(who + ": constrained eigensolver failed");

  ConstrainedEigs out;
  out.available = static_cast<int>(Ar.rows());
  const int kept = std::min(count, out.available);
  out.values = es.eigenvalues().head(kept);
  out.vectors = Z * es.eigenvectors().leftCols(kept);
  if (out.available > kept)
    out.tail = es.eigenvalues()[kept];
  return out;
}

} // namespace

V2FirstResult build_v2_first(const FineSystem& sys,
                             const CoarseDecomposition& decomp,
                             const SForm& sform, const AuxSpace& aux1, int J) {
  if (J < 1)
    throw ConfigError("v2 first: J must be >= 1");
  V2FirstResult res;
  res.basis.tag = SpaceTag::V2First;
  const double Hinv2 = 1.0 / (decomp.H() * decomp.H());

  std::vector<Vec> columns;
  for (int g : decomp.interior_coarse_nodes()) {
    const auto& dofs = decomp.omega_interior_nodes[g];
    const int gx = g % (decomp.N + 1), gy = g / (decomp.N + 1);
    std::vector<int> elements;
    for (int ey = gy - 1; ey <= gy; ++ey)
      for (int ex = gx - 1; ex <= gx; ++ex)
        elements.push_back(ey * decomp.N + ex);

    const Mat A_sub = Mat(sys.A.submatrix(dofs));
    const Mat B_sub = Hinv2 * Mat(sys.M.submatrix(dofs));
    const Mat C = Mat(restrict_cols(
        aux_constraint_rows(aux1, sform.S_loc, decomp, elements,
                            sys.mesh.node_count()),
        dofs, sys.mesh.node_count()));

    ConstrainedEigs eigs = constrained_eigs(
        A_sub, B_sub, C, J, "v2 first, coarse node " + std::to_string(g));
    res.shortfall += J - static_cast<int>(eigs.values.size());
    res.owner_nodes.push_back(g);
    res.gamma_tail.push_back(eigs.tail);

    for (int j = 0; j < eigs.values.size(); ++j) {
      Vec xi = eigs.vectors.col(j);
      const double an = std::sqrt(std::max(xi.dot(A_sub * xi), 0.0));
      if (an > 0)
        xi /= an;
      Vec full = Vec::Zero(sys.mesh.node_count());
      scatter_add(full, dofs, xi);
      columns.push_back(std::move(full));
      res.basis.info.push_back({g, j, eigs.values[j]});
    }
  }

  res.basis.cols.resize(sys.mesh.node_count(), columns.size());
  for (size_t c = 0; c < columns.size(); ++c)
    res.basis.cols.col(c) = columns[c];
  return res;
}

V2SecondResult build_v2_second(const FineSystem& sys,
                               const CoarseDecomposition& decomp,
                               const SForm& sform, const AuxSpace& aux1, int J,
                               int layers, bool global_variant) {
  if (J < 1)
    throw ConfigError("v2 second: J must be >= 1");
  V2SecondResult res;
  res.basis.tag =
      global_variant ? SpaceTag::V2SecondGlo : SpaceTag::V2Second;
  const int ne = decomp.element_count();
  const std::vector<Mat> mass_blocks = element_mass_blocks(sys.mesh, decomp);

  // Stage 1: the auxiliary eigenproblem per element inside the kernel of the
  // first-kind projection, natural boundary on the element, Dirichlet clamp
  // kept on the domain boundary. Eigenvectors come out mass-orthonormal.
  res.aux2.L = J;
  res.aux2.modes.resize(ne);
  res.aux2.eigenvalues.resize(ne);
  res.aux2.tail.resize(ne);
  res.aux2.offset.assign(ne + 1, 0);

  for (int e = 0; e < ne; ++e) {
    const auto& nodes = decomp.element_nodes[e];
    std::vector<int> kept;
    for (size_t i = 0; i < nodes.size(); ++i)
      if (!sys.mesh.is_boundary_node(nodes[i]))
        kept.push_back(static_cast<int>(i));
    const int nk = static_cast<int>(kept.size());

    const Mat A_full = assemble_local(sys.mesh, decomp.element_cells[e], nodes,
                                      sys.kappa, true);
    Mat A_k(nk, nk), M_k(nk, nk), C_k(aux1.count(e), nk);
    const Mat C_full = (sform.S_loc[e] * aux1.modes[e]).transpose();
    for (int r = 0; r < nk; ++r)
      for (int c = 0; c < nk; ++c) {
        A_k(r, c) = A_full(kept[r], kept[c]);
        M_k(r, c) = mass_blocks[e](kept[r], kept[c]);
      }
    for (int r = 0; r < C_k.rows(); ++r)
      for (int c = 0; c < nk; ++c)
        C_k(r, c) = C_full(r, kept[c]);

    ConstrainedEigs eigs = constrained_eigs(
        A_k, M_k, C_k, J, "v2 second, element " + std::to_string(e));
    res.shortfall += J - static_cast<int>(eigs.values.size());

    Mat modes = Mat::Zero(nodes.size(), eigs.values.size());
    for (int j = 0; j < eigs.values.size(); ++j) {
      Vec v = eigs.vectors.col(j);
      int imax;
      v.cwiseAbs().maxCoeff(&imax);
      if (v[imax] < 0)
        v = -v;
      for (int r = 0; r < nk; ++r)
        modes(kept[r], j) = v[r];
    }
    res.aux2.modes[e] = std::move(modes);
    res.aux2.eigenvalues[e] = eigs.values;
    res.aux2.tail[e] = eigs.tail;
    res.gamma_tail.push_back(eigs.tail);
    res.aux2.offset[e + 1] = res.aux2.offset[e] + static_cast<int>(eigs.values.size());
  }

  // Stage 2: energy minimization with two multiplier blocks. Globally this
  // is one factorization; localized, one bordered system per patch.
  res.basis.cols = Mat::Zero(sys.mesh.node_count(), res.aux2.total());

  std::vector<int> all_elements(ne);
  for (int e = 0; e < ne; ++e)
    all_elements[e] = e;

  auto stack_constraints = [&](const std::vector<int>& elements,
                               const std::vector<int>& dofs, int& nc1) {
    const SpMat C1 = restrict_cols(
        aux_constraint_rows(aux1, sform.S_loc, decomp, elements,
                            sys.mesh.node_count()),
        dofs, sys.mesh.node_count());
    const SpMat C2 = restrict_cols(
        aux_constraint_rows(res.aux2, mass_blocks, decomp, elements,
                            sys.mesh.node_count()),
        dofs, sys.mesh.node_count());
    nc1 = static_cast<int>(C1.rows());
    SpMat C(C1.rows() + C2.rows(), C1.cols());
    std::vector<Triplet> trips;
    for (int col = 0; col < C1.outerSize(); ++col)
      for (SpMat::InnerIterator it(C1, col); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), col, it.value());
    for (int col = 0; col < C2.outerSize(); ++col)
      for (SpMat::InnerIterator it(C2, col); it; ++it)
        trips.emplace_back(static_cast<int>(C1.rows() + it.row()), col,
                           it.value());
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
  };

  std::unique_ptr<SaddleSolver> global_solver;
  int global_nc1 = 0;
  if (global_variant) {
    const SpMat C = stack_constraints(all_elements, sys.interior, global_nc1);
    global_solver = std::make_unique<SaddleSolver>(sys.A_int, C);
  }

  int col = 0;
  for (int e = 0; e < ne; ++e) {
    const std::vector<int> elements =
        global_variant ? all_elements : decomp.patch_elements(e, layers);
    const std::vector<int> dofs =
        global_variant ? sys.interior : decomp.patch_interior_nodes(e, layers);

    std::unique_ptr<SaddleSolver> local_solver;
    const SaddleSolver* solver = global_solver.get();
    int nc1 = global_nc1;
    if (!global_variant) {
      const SpMat C = stack_constraints(elements, dofs, nc1);
      local_solver = std::make_unique<SaddleSolver>(sys.A.submatrix(dofs), C);
      solver = local_solver.get();
    }

    for (int j = 0; j < res.aux2.count(e); ++j, ++col) {
      Vec g = Vec::Zero(solver->constraint_count());
      g[nc1 + constraint_row_index(res.aux2, elements, e, j)] = 1.0;
      Vec zeta;
      try {
        zeta = solver->solve(Vec::Zero(solver->primal_size()), g);
      } catch (const NumericError& err) {
        throw NumericError("v2 second basis (" + std::to_string(e) + "," +
                           std::to_string(j) + "): " + err.what());
      }
      for (size_t r = 0; r < dofs.size(); ++r)
        res.basis.cols(dofs[r], col) = zeta[r];
      res.basis.info.push_back({e, j, res.aux2.eigenvalues[e][j]});
    }
  }
  return res;
}

} // namespace pexfem
