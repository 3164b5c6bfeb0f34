#pragma once

#include "pexfem/aux_space.hpp"
#include "pexfem/basis.hpp"

namespace pexfem {

/// Localized constraint-energy-minimizing basis: for each coarse element
/// and aux mode, minimize energy on the oversampled patch subject to the
/// aux constraints, via the bordered saddle system.
SubspaceBasis build_cem_basis(const FineSystem& sys,
                              const CoarseDecomposition& decomp,
                              const SForm& sform, const AuxSpace& aux,
                              int layers);

/// Same minimization posed on the whole domain (validation and the
/// second-choice construction reuse it).
SubspaceBasis build_global_cem_basis(const FineSystem& sys,
                                     const CoarseDecomposition& decomp,
                                     const SForm& sform, const AuxSpace& aux);

} // namespace pexfem
