#pragma once

#include "pexfem/coarse.hpp"
#include "pexfem/system.hpp"

namespace pexfem {

enum class KtildeMode { KappaH2, KappaGradChi2 };

/// The weighted s-form s(u,v) = sum_i int_{K_i} ktilde u v. Besides the
/// global matrix we keep the per-element blocks: auxiliary functions are
/// element-local L2 objects, so every s-pairing against them is an
/// element-local integral.
struct SForm {
  KtildeMode mode = KtildeMode::KappaH2;
  CellField ktilde;
  SymOperator S;          // global weighted mass
  std::vector<Mat> S_loc; // per coarse element, ordered like element_nodes
};

SForm build_sform(const FineSystem& sys, const CoarseDecomposition& decomp,
                  KtildeMode mode);

/// Auxiliary spectral space V_aux: per coarse element, the lowest
/// eigenfunctions of (kappa-stiffness) psi = lambda (s-form) psi with
/// natural conditions on interior element boundaries and the Dirichlet
/// clamp kept on the domain boundary. Modes are s-orthonormal, stored on
/// the element's local node list.
struct AuxSpace {
  int L = 0;
  std::vector<Mat> modes;       // element -> (local nodes) x L_i
  std::vector<Vec> eigenvalues; // ascending per element
  std::vector<double> tail;     // lambda_{L_i+1}, +inf when spectrum exhausted
  std::vector<int> offset;      // flattened index of (element, 0)

  int count(int element) const {
    return static_cast<int>(modes[element].cols());
  }
  int total() const { return offset.back(); } // offset has element_count()+1 entries
};

AuxSpace solve_aux_spectral(const FineSystem& sys,
                            const CoarseDecomposition& decomp,
                            const SForm& sform, int L);

/// Element-wise (broken) representation of an L2 function: one local value
/// vector per coarse element. Members of V_aux are two-valued across element
/// interfaces, so a conforming dof vector cannot hold them.
struct BrokenField {
  std::vector<Vec> elem;

  double max_abs() const;
};

BrokenField break_field(const CoarseDecomposition& decomp, const Vec& full);
BrokenField broken_diff(const BrokenField& a, const BrokenField& b);

/// s-orthogonal projection onto V_aux, element by element.
BrokenField project_aux(const AuxSpace& aux, const SForm& sform,
                        const BrokenField& w);
BrokenField project_aux(const AuxSpace& aux, const SForm& sform,
                        const CoarseDecomposition& decomp, const Vec& full);

/// sqrt(sum_i w_i' S_loc_i w_i) — the s-norm of a broken field.
double broken_s_norm(const SForm& sform, const BrokenField& w);

/// Plain-mass element blocks, ordered like element_nodes. Pairings against
/// the second-choice auxiliary functions use these instead of S_loc.
std::vector<Mat> element_mass_blocks(const FineMesh& mesh,
                                     const CoarseDecomposition& decomp);

/// Constraint rows s_i(., psi_j^{(i)}) for the aux modes of the given
/// elements, as sparse rows over the global dof numbering. Row order is
/// (element, j) in the order the elements are listed. `local_gram` selects
/// the pairing (S_loc for the s-form, mass blocks for L2).
SpMat aux_constraint_rows(const AuxSpace& aux,
                          const std::vector<Mat>& local_gram,
                          const CoarseDecomposition& decomp,
                          const std::vector<int>& elements, int global_size);

/// Flattened (element, mode) row index within aux_constraint_rows(elements).
int constraint_row_index(const AuxSpace& aux, const std::vector<int>& elements,
                         int element, int j);

} // namespace pexfem
