#pragma once

#include "pexfem/aux_space.hpp"
#include "pexfem/basis.hpp"

namespace pexfem {

/// First choice: per interior coarse neighborhood, the lowest eigenfunctions
/// of kappa-stiffness vs H^-2 mass restricted to V_0(omega_i) intersected
/// with the kernel of the aux projection. Eigenvectors are a-normalized.
struct V2FirstResult {
  SubspaceBasis basis;            // tag V2First, owner = coarse node id
  std::vector<int> owner_nodes;   // interior coarse nodes, basis order
  std::vector<double> gamma_tail; // gamma_{J_i+1} per neighborhood
  int shortfall = 0;              // modes missing where the kernel was thin
};

V2FirstResult build_v2_first(const FineSystem& sys,
                             const CoarseDecomposition& decomp,
                             const SForm& sform, const AuxSpace& aux1, int J);

/// Second choice: per coarse element, constrained eigenfunctions xi form
/// V_aux,2; each basis function zeta minimizes energy subject to
/// s-orthogonality to V_aux,1 and prescribed L2 moments against V_aux,2,
/// posed globally or on the oversampled patch.
struct V2SecondResult {
  SubspaceBasis basis;   // tag V2Second (localized) or V2SecondGlo
  AuxSpace aux2;         // the xi eigenpairs (mass-orthonormal, element-local)
  std::vector<double> gamma_tail; // gamma_{J_i+1} per element
  int shortfall = 0;
};

V2SecondResult build_v2_second(const FineSystem& sys,
                               const CoarseDecomposition& decomp,
                               const SForm& sform, const AuxSpace& aux1, int J,
                               int layers, bool global_variant);

} // namespace pexfem
