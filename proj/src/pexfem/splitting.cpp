#include "pexfem/splitting.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pexfem {

namespace {

Mat gram(const Mat& U, const SpMat& Op, const Mat& V) {
  if (U.cols() == 0 || V.cols() == 0)
    return Mat::Zero(U.cols(), V.cols());
  return U.transpose() * (Op * V);
}

} // namespace

ReducedSystem reduce(const FineSystem& sys, const SubspaceBasis& V1,
                     const SubspaceBasis* V2, const Vec& load_full) {
  ReducedSystem red;
  red.V1 = V1.cols;
  red.V2 = V2 ? V2->cols : Mat(sys.mesh.node_count(), 0);
  red.A11 = gram(red.V1, sys.A.mat, red.V1);
  red.A12 = gram(red.V1, sys.A.mat, red.V2);
  red.A22 = gram(red.V2, sys.A.mat, red.V2);
  red.M11 = gram(red.V1, sys.M.mat, red.V1);
  red.M12 = gram(red.V1, sys.M.mat, red.V2);
  red.M22 = gram(red.V2, sys.M.mat, red.V2);
  red.F1 = red.V1.transpose() * load_full;
  red.F2 = red.V2.transpose() * load_full;

  for (const Mat* m : {&red.M11, &red.M22}) {
    if (m->rows() == 0)
      continue;
    Eigen::SelfAdjointEigenSolver<Mat> es(*m);
    if (!(es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff()))
      throw NumericError("reduce: mass Gram numerically rank deficient");
  }
  return red;
}

double ReducedSystem::gamma() const {
  if (n1() == 0 || n2() == 0)
    return 0.0;
  const Eigen::LLT<Mat> l1(M11), l2(M22);
  if (l1.info() != Eigen::Success || l2.info() != Eigen::Success)
    throw NumericError("gamma: mass Gram not positive definite");
  const Mat T = l1.matrixL().solve(
      (l2.matrixL().solve(M12.transpose())).transpose());
  Eigen::JacobiSVD<Mat> svd(T);
  return std::min(svd.singularValues()[0], 1.0);
}

Vec ReducedSystem::reconstruct(const Vec& u1, const Vec& u2) const {
  Vec out = V1 * u1;
  if (n2() > 0)
    out += V2 * u2;
  return out;
}

SplitState init_split(const ReducedSystem& red, const FineSystem& sys,
                      const Vec& u0_full) {
  const int n1 = red.n1(), n2 = red.n2();
  Mat Mj(n1 + n2, n1 + n2);
  Mj.topLeftCorner(n1, n1) = red.M11;
  Mj.topRightCorner(n1, n2) = red.M12;
  Mj.bottomLeftCorner(n2, n1) = red.M12.transpose();
  Mj.bottomRightCorner(n2, n2) = red.M22;
  Vec rhs(n1 + n2);
  const Vec Mu0 = sys.M.mat * u0_full;
  rhs.head(n1) = red.V1.transpose() * Mu0;
  rhs.tail(n2) = red.V2.transpose() * Mu0;
  const Eigen::LDLT<Mat> ldlt(Mj);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("init_split: joint mass Gram factorization failed");
  const Vec c = ldlt.solve(rhs);
  SplitState s;
  s.u1 = c.head(n1);
  s.u2 = c.tail(n2);
  s.u1_prev = s.u1;
  s.u2_prev = s.u2;
  return s;
}

SplitStepper::SplitStepper(const ReducedSystem& red, const SchemeConfig& cfg)
    : red_(red), cfg_(cfg) {
  if (!(cfg.tau > 0.0))
    throw ConfigError("split stepper: tau must be positive");
  if (!(cfg.omega >= 0.0 && cfg.omega <= 1.0))
    throw ConfigError("split stepper: omega must lie in [0,1]");
  if (cfg.scheme == Scheme::General && cfg.mu != 0.0 && cfg.mu != 1.0)
    throw ConfigError("split stepper: mu must be 0 or 1");
  gamma_ = red.gamma();

  const int n1 = red.n1(), n2 = red.n2();
  const double tau = cfg.tau;

  switch (cfg.scheme) {
  case Scheme::OrthogonalSplit: {
    if (n2 > 0) {
      const double cross = red.M12.norm();
      const double scale = std::sqrt(red.M11.norm() * red.M22.norm());
      if (!(cross <= 1e-8 * std::max(scale, 1e-300)))
        throw ConfigError("orthogonal split requires an L2-orthogonal pair "
                          "(||M12|| too large)");
    }
    imp11_.compute(red.M11 + tau * red.A11);
    if (n2 > 0)
      mass22_.compute(red.M22);
    break;
  }
  case Scheme::PartialExplicit: {
    imp11_.compute(red.M11 + tau * red.A11);
    if (n2 > 0)
      mass22_.compute(red.M22);
    break;
  }
  case Scheme::ImplicitCoarse: {
    Mat K(n1 + n2, n1 + n2);
    K.topLeftCorner(n1, n1) = red.M11 + tau * red.A11;
    K.topRightCorner(n1, n2) = red.M12 + tau * red.A12;
    K.bottomLeftCorner(n2, n1) = K.topRightCorner(n1, n2).transpose();
    K.bottomRightCorner(n2, n2) = red.M22 + tau * red.A22;
    coupled_.compute(K);
    break;
  }
  case Scheme::General: {
    if (cfg.mu == 0.0) {
      imp11_.compute(red.M11 + tau * red.A11);
      if (n2 > 0)
        mass22_.compute(red.M22);
    } else {
      Mat K(n1 + n2, n1 + n2);
      K.topLeftCorner(n1, n1) = red.M11 + tau * red.A11;
      K.topRightCorner(n1, n2) = red.M12;
      K.bottomLeftCorner(n2, n1) =
          red.M12.transpose() + tau * cfg.omega * red.A12.transpose();
      K.bottomRightCorner(n2, n2) = red.M22;
      coupled_.compute(K);
    }
    break;
  }
  }
  if (imp11_.rows() > 0 && imp11_.info() != Eigen::Success)
    throw NumericError("split stepper: implicit block factorization failed");
}

double SplitStepper::joint_quadratic(const Mat& B11, const Mat& B12,
                                     const Mat& B22, const Vec& u1,
                                     const Vec& u2) const {
  double q = u1.dot(B11 * u1);
  if (red_.n2() > 0) {
    q += 2.0 * u1.dot(B12 * u2);
    q += u2.dot(B22 * u2);
  }
  return q;
}

double SplitStepper::monitor_energy(const SplitState& s) const {
  const Vec d1 = s.u1 - s.u1_prev;
  double acc = d1.dot(red_.M11 * d1);
  if (red_.n2() > 0) {
    const Vec d2 = s.u2 - s.u2_prev;
    acc += d2.dot(red_.M22 * d2);
  }
  const double en =
      joint_quadratic(red_.A11, red_.A12, red_.A22, s.u1, s.u2);
  return 0.5 * gamma_ * gamma_ * acc + 0.5 * cfg_.tau * std::max(en, 0.0);
}

SplitState SplitStepper::step(const SplitState& state) const {
  const int n2 = red_.n2();
  const double tau = cfg_.tau, omega = cfg_.omega;
  SplitState next;
  next.step = state.step + 1;
  next.u1_prev = state.u1;
  next.u2_prev = state.u2;

  const Scheme effective =
      (cfg_.scheme == Scheme::General && cfg_.mu == 0.0)
          ? Scheme::PartialExplicit
          : cfg_.scheme;

  switch (effective) {
  case Scheme::OrthogonalSplit: {
    Vec r1 = red_.M11 * state.u1 + tau * red_.F1;
    if (n2 > 0)
      r1 -= tau * (red_.A12 * state.u2);
    next.u1 = imp11_.solve(r1);
    if (n2 > 0) {
      const Vec r2 = red_.M22 * state.u2 -
                     tau * (red_.A12.transpose() * next.u1 +
                            red_.A22 * state.u2 - red_.F2);
      next.u2 = mass22_.solve(r2);
    } else {
      next.u2 = state.u2;
    }
    break;
  }
  case Scheme::PartialExplicit: {
    Vec r1 = red_.M11 * state.u1 + tau * red_.F1;
    if (n2 > 0)
      r1 -= red_.M12 * (state.u2 - state.u2_prev) +
            tau * (red_.A12 * state.u2);
    next.u1 = imp11_.solve(r1);
    if (n2 > 0) {
      const Vec a_expl = (1.0 - omega) * (red_.A12.transpose() * state.u1) +
                         omega * (red_.A12.transpose() * next.u1) +
                         red_.A22 * state.u2;
      const Vec r2 = red_.M22 * state.u2 -
                     red_.M12.transpose() * (state.u1 - state.u1_prev) -
                     tau * a_expl + tau * red_.F2;
      next.u2 = mass22_.solve(r2);
    } else {
      next.u2 = state.u2;
    }
    break;
  }
  case Scheme::ImplicitCoarse: {
    const int n1 = red_.n1();
    Vec rhs(n1 + n2);
    rhs.head(n1) = red_.M11 * state.u1 + tau * red_.F1;
    if (n2 > 0) {
      rhs.head(n1) += red_.M12 * state.u2;
      rhs.tail(n2) = red_.M12.transpose() * state.u1 + red_.M22 * state.u2 +
                     tau * red_.F2;
    }
    const Vec sol = coupled_.solve(rhs);
    next.u1 = sol.head(n1);
    next.u2 = sol.tail(n2);
    break;
  }
  case Scheme::General: { // mu = 1
    const int n1 = red_.n1();
    Vec rhs(n1 + n2);
    rhs.head(n1) = red_.M11 * state.u1 + tau * red_.F1;
    if (n2 > 0) {
      rhs.head(n1) += red_.M12 * state.u2 - tau * (red_.A12 * state.u2);
      rhs.tail(n2) = red_.M22 * state.u2 + red_.M12.transpose() * state.u1 -
                     tau * (1.0 - omega) * (red_.A12.transpose() * state.u1) -
                     tau * (red_.A22 * state.u2) + tau * red_.F2;
    }
    const Vec sol = coupled_.solve(rhs);
    next.u1 = sol.head(n1);
    next.u2 = sol.tail(n2);
    break;
  }
  }
  next.monitor = monitor_energy(next);
  return next;
}

Trajectory SplitStepper::run(SplitState state, int snapshot_stride) const {
  Trajectory traj;
  traj.stride = snapshot_stride;
  const double l2_0 = std::sqrt(std::max(
      joint_quadratic(red_.M11, red_.M12, red_.M22, state.u1, state.u2), 0.0));
  const double threshold = 1e6 * std::max(l2_0, 1.0);

  auto record = [&](const SplitState& s) {
    StepRecord rec;
    rec.step = s.step;
    rec.time = s.step * cfg_.tau;
    rec.l2 = std::sqrt(std::max(
        joint_quadratic(red_.M11, red_.M12, red_.M22, s.u1, s.u2), 0.0));
    rec.energy = std::sqrt(std::max(
        joint_quadratic(red_.A11, red_.A12, red_.A22, s.u1, s.u2), 0.0));
    rec.monitor = s.monitor;
    rec.blowup = !(rec.l2 <= threshold) || !std::isfinite(rec.l2);
    traj.records.push_back(rec);
    if (snapshot_stride > 0 &&
        (s.step % snapshot_stride == 0 || s.step == cfg_.steps))
      traj.snapshots.push_back(red_.reconstruct(s.u1, s.u2));
  };

  state.monitor = monitor_energy(state);
  record(state);
  for (int n = 0; n < cfg_.steps; ++n) {
    state = step(state);
    record(state);
    if (traj.records.back().blowup)
      break;
  }
  return traj;
}

} // namespace pexfem
