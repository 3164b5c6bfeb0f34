#pragma once

#include <array>

#include "pexfem/basis.hpp"
#include "pexfem/coarse.hpp"
#include "pexfem/system.hpp"

namespace pexfem {

/// Largest L2 principal-angle cosine between the spans (strengthened
/// Cauchy-Schwarz constant). Sets *overlap when the joint Gram is
/// numerically rank deficient, i.e. the spaces share a direction.
double compute_gamma(const SubspaceBasis& V1, const SubspaceBasis& V2,
                     const SymOperator& M, bool* overlap = nullptr);

/// Max pairwise gamma between the four colored parts of V2.
double compute_beta(const SubspaceBasis& V2, const CoarseDecomposition& decomp,
                    const SymOperator& M);

/// sup over the span of G(v) = ||v||_a^2 / (H^-2 ||v||^2): the largest
/// eigenvalue of (V'AV) x = theta H^-2 (V'MV) x.
double compute_supG(const SubspaceBasis& V, const SymOperator& A,
                    const SymOperator& M, double H);

/// Per-color restriction of compute_supG; colors with no columns give 0.
std::array<double, 4> compute_supG_per_color(const SubspaceBasis& V2,
                                             const CoarseDecomposition& decomp,
                                             const SymOperator& A,
                                             const SymOperator& M);

int basis_color(const SubspaceBasis& V2, const CoarseDecomposition& decomp,
                int column);

/// Removes columns that are numerically dependent on the rest in the M inner
/// product (pivoted-Cholesky pivot below tol after normalization). At large
/// contrast, modes trapped in a low-kappa pocket shared by two overlapping
/// neighborhoods show up once per neighborhood; the duplicates carry no new
/// span. Returns the number of columns removed.
int prune_dependent_columns(SubspaceBasis& basis, const SymOperator& M,
                            double tol = 1e-8);

enum class TauMode { Thm32, Thm33 };

/// Stability constants of one (V1, V2) pair plus the recommended time steps.
struct ConstantsReport {
  double contrast = 1.0;
  double H = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double supG_V1 = 0.0;
  double supG_V2 = 0.0;
  std::array<double, 4> supG_color{0, 0, 0, 0};
  double max_tail = 0.0; // max_i gamma_{J_i+1} over owners
  double tau_thm32 = 0.0;
  double tau_thm33 = 0.0;
  int shortfall = 0;
};

double recommend_tau(const ConstantsReport& report, double omega, double H,
                     TauMode mode);

ConstantsReport build_constants_report(const FineSystem& sys,
                                       const CoarseDecomposition& decomp,
                                       const SubspaceBasis& V1,
                                       const SubspaceBasis& V2,
                                       const std::vector<double>& tails,
                                       int shortfall, double omega);

} // namespace pexfem
