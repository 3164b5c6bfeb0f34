#pragma once

#include <optional>

#include "pexfem/basis.hpp"
#include "pexfem/steppers.hpp"

namespace pexfem {

enum class Scheme { ImplicitCoarse, OrthogonalSplit, PartialExplicit, General };

struct SchemeConfig {
  Scheme scheme = Scheme::PartialExplicit;
  double mu = 0.0;    // general family only, in {0,1}
  double omega = 1.0; // explicit-coupling weight in [0,1]
  double tau = 1e-4;
  int steps = 1;
};

/// Galerkin reduction of the fine system onto V1 (+ optionally V2): the six
/// Gram blocks, the reduced loads and the bases themselves for
/// reconstruction. V2 may be absent (n2 = 0), in which case every scheme
/// degenerates to backward Euler in V1.
struct ReducedSystem {
  Mat A11, A12, A22;
  Mat M11, M12, M22;
  Mat V1, V2;
  Vec F1, F2;

  int n1() const { return static_cast<int>(M11.rows()); }
  int n2() const { return static_cast<int>(M22.rows()); }

  /// Strengthened Cauchy-Schwarz constant of the pair, from the mass blocks.
  double gamma() const;

  Vec reconstruct(const Vec& u1, const Vec& u2) const;
};

ReducedSystem reduce(const FineSystem& sys, const SubspaceBasis& V1,
                     const SubspaceBasis* V2, const Vec& load_full);

struct SplitState {
  Vec u1, u1_prev;
  Vec u2, u2_prev;
  int step = 0;
  double monitor = 0.0;
};

/// Coupled L2 projection of u0 onto V1 + V2; history slots start equal.
SplitState init_split(const ReducedSystem& red, const FineSystem& sys,
                      const Vec& u0_full);

/// One-run stepper; factorizations are prepared once for a fixed tau.
class SplitStepper {
public:
  SplitStepper(const ReducedSystem& red, const SchemeConfig& cfg);

  SplitState step(const SplitState& state) const;

  /// Advances `cfg.steps` steps recording norms, the Theorem-3.2 monitor and
  /// the blow-up flag. snapshot_stride > 0 stores reconstructed fine vectors.
  Trajectory run(SplitState state, int snapshot_stride = 0) const;

  double gamma() const { return gamma_; }

private:
  const ReducedSystem& red_;
  SchemeConfig cfg_;
  double gamma_ = 0.0;
  Eigen::LDLT<Mat> imp11_;    // M11 + tau A11
  Eigen::LDLT<Mat> mass22_;   // M22
  Eigen::PartialPivLU<Mat> coupled_; // joint implicit / general blocks

  double joint_quadratic(const Mat& B11, const Mat& B12, const Mat& B22,
                         const Vec& u1, const Vec& u2) const;
  double monitor_energy(const SplitState& s) const;
};

} // namespace pexfem
