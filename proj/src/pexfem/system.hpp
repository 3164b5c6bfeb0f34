#pragma once

#include "pexfem/assemble.hpp"

namespace pexfem {

/// Fine mesh plus the assembled global operators. Stiffness and mass keep
/// boundary rows; `interior` is the sorted dof set after Dirichlet
/// elimination and A_int/M_int the corresponding submatrices.
struct FineSystem {
  FineMesh mesh;
  CellField kappa;
  SymOperator A; // stiffness, int kappa grad u . grad v
  SymOperator M; // mass, int u v
  std::vector<int> interior;
  SpMat A_int;
  SpMat M_int;

  Vec restrict_interior(const Vec& full) const { return gather(full, interior); }
  Vec prolong(const Vec& inner) const {
    Vec full = Vec::Zero(mesh.node_count());
    scatter_add(full, interior, inner);
    return full;
  }

  double norm(const Vec& full, NormKind kind) const {
    return operator_norm(kind == NormKind::Mass ? M : A, full);
  }
};

FineSystem build_fine_system(const FineMesh& mesh, CellField kappa);

} // namespace pexfem
