#include "pexfem/aux_space.hpp"

#include <Eigen/Eigenvalues>

namespace pexfem {

SForm build_sform(const FineSystem& sys, const CoarseDecomposition& decomp,
                  KtildeMode mode) {
  SForm s;
  s.mode = mode;
  Vec w = sys.kappa.values;
  if (mode == KtildeMode::KappaH2) {
    w *= 1.0 / (decomp.H() * decomp.H());
  } else {
    w = w.cwiseProduct(decomp.pou_gradient_sq_per_cell());
  }
  s.ktilde = make_cell_field(sys.mesh.n, std::move(w));
  s.S = assemble_weighted_mass(sys.mesh, s.ktilde);
  s.S_loc.resize(decomp.element_count());
  for (int e = 0; e < decomp.element_count(); ++e)
    s.S_loc[e] = assemble_local(sys.mesh, decomp.element_cells[e],
                                decomp.element_nodes[e], s.ktilde, false);
  return s;
}

AuxSpace solve_aux_spectral(const FineSystem& sys,
                            const CoarseDecomposition& decomp,
                            const SForm& sform, int L) {
  if (L < 1)
    throw ConfigError("aux space: need at least one mode per element");
  AuxSpace aux;
  aux.L = L;
  const int ne = decomp.element_count();
  aux.modes.resize(ne);
  aux.eigenvalues.resize(ne);
  aux.tail.resize(ne);
  aux.offset.assign(ne + 1, 0);

  for (int e = 0; e < ne; ++e) {
    const auto& nodes = decomp.element_nodes[e];
    std::vector<int> kept; // local positions of non-Dirichlet nodes
    for (size_t i = 0; i < nodes.size(); ++i)
      if (!sys.mesh.is_boundary_node(nodes[i]))
        kept.push_back(static_cast<int>(i));
    const int nk = static_cast<int>(kept.size());
    if (L > nk)
      throw ConfigError("aux space: L=" + std::to_string(L) +
                        " exceeds the " + std::to_string(nk) +
                        " free dofs of element " + std::to_string(e));

    const Mat A_full = assemble_local(sys.mesh, decomp.element_cells[e], nodes,
                                      sys.kappa, true);
    Mat A_k(nk, nk), S_k(nk, nk);
    for (int r = 0; r < nk; ++r)
      for (int c = 0; c < nk; ++c) {
        A_k(r, c) = A_full(kept[r], kept[c]);
        S_k(r, c) = sform.S_loc[e](kept[r], kept[c]);
      }

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A_k, S_k);
    if (es.info() != Eigen::Success)
      throw NumericError("aux space: eigensolver failed on element " +
                         std::to_string(e));

    Mat modes = Mat::Zero(nodes.size(), L);
    Vec lambdas(L);
    for (int j = 0; j < L; ++j) {
      Vec v = es.eigenvectors().col(j); // s-orthonormal by construction
      int imax;
      v.cwiseAbs().maxCoeff(&imax);
      if (v[imax] < 0)
        v = -v;
      for (int r = 0; r < nk; ++r)
        modes(kept[r], j) = v[r];
      lambdas[j] = es.eigenvalues()[j];
    }
    aux.modes[e] = std::move(modes);
    aux.eigenvalues[e] = std::move(lambdas);
    aux.tail[e] = (L < nk) ? es.eigenvalues()[L]
                           : std::numeric_limits<double>::infinity();
    aux.offset[e + 1] = aux.offset[e] + L;
  }
  return aux;
}

double BrokenField::max_abs() const {
  double m = 0.0;
  for (const auto& v : elem)
    if (v.size() > 0)
      m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

BrokenField break_field(const CoarseDecomposition& decomp, const Vec& full) {
  BrokenField out;
  out.elem.reserve(decomp.element_count());
  for (int e = 0; e < decomp.element_count(); ++e)
    out.elem.push_back(gather(full, decomp.element_nodes[e]));
  return out;
}

BrokenField broken_diff(const BrokenField& a, const BrokenField& b) {
  BrokenField out;
  out.elem.reserve(a.elem.size());
  for (size_t e = 0; e < a.elem.size(); ++e)
    out.elem.push_back(a.elem[e] - b.elem[e]);
  return out;
}

BrokenField project_aux(const AuxSpace& aux, const SForm& sform,
                        const BrokenField& w) {
  BrokenField out;
  out.elem.resize(w.elem.size());
  for (size_t e = 0; e < w.elem.size(); ++e) {
    const Vec coeff =
        aux.modes[e].transpose() * (sform.S_loc[e] * w.elem[e]);
    out.elem[e] = aux.modes[e] * coeff;
  }
  return out;
}

BrokenField project_aux(const AuxSpace& aux, const SForm& sform,
                        const CoarseDecomposition& decomp, const Vec& full) {
  return project_aux(aux, sform, break_field(decomp, full));
}

double broken_s_norm(const SForm& sform, const BrokenField& w) {
  double q = 0.0;
  for (size_t e = 0; e < w.elem.size(); ++e)
    q += w.elem[e].dot(sform.S_loc[e] * w.elem[e]);
  return std::sqrt(std::max(q, 0.0));
}

std::vector<Mat> element_mass_blocks(const FineMesh& mesh,
                                     const CoarseDecomposition& decomp) {
  const CellField one = make_constant_field(mesh, 1.0);
  std::vector<Mat> blocks(decomp.element_count());
  for (int e = 0; e < decomp.element_count(); ++e)
    blocks[e] = assemble_local(mesh, decomp.element_cells[e],
                               decomp.element_nodes[e], one, false);
  return blocks;
}

SpMat aux_constraint_rows(const AuxSpace& aux,
                          const std::vector<Mat>& local_gram,
                          const CoarseDecomposition& decomp,
                          const std::vector<int>& elements, int global_size) {
  std::vector<Triplet> trips;
  int row = 0;
  for (int e : elements) {
    const Mat rows_loc = (local_gram[e] * aux.modes[e]).transpose();
    const auto& nodes = decomp.element_nodes[e];
    for (int j = 0; j < aux.count(e); ++j, ++row)
      for (size_t c = 0; c < nodes.size(); ++c)
        if (rows_loc(j, c) != 0.0)
          trips.emplace_back(row, nodes[c], rows_loc(j, c));
  }
  SpMat C(row, global_size);
  C.setFromTriplets(trips.begin(), trips.end());
  C.makeCompressed();
  return C;
}

int constraint_row_index(const AuxSpace& aux, const std::vector<int>& elements,
                         int element, int j) {
  int row = 0;
  for (int e : elements) {
    if (e == element)
      return row + j;
    row += aux.count(e);
  }
  throw ConfigError("constraint_row_index: element not in patch");
}

} // namespace pexfem
