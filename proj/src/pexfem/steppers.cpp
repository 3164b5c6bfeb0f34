#include "pexfem/steppers.hpp"

#include <Eigen/SparseCholesky>
#include <cstdio>
#include <fstream>

namespace pexfem {

LoadFunction constant_load(Vec f) {
  return [f = std::move(f)](double) { return f; };
}

namespace {

StepRecord make_record(const FineSystem& sys, int step, double time,
                       const Vec& u_int, double blowup_threshold) {
  StepRecord rec;
  rec.step = step;
  rec.time = time;
  rec.l2 = std::sqrt(std::max(0.0, u_int.dot(sys.M_int * u_int)));
  rec.energy = std::sqrt(std::max(0.0, u_int.dot(sys.A_int * u_int)));
  rec.blowup = !(rec.l2 <= blowup_threshold) || !std::isfinite(rec.l2);
  return rec;
}

} // namespace

Trajectory reference_solve(const FineSystem& sys, const LoadFunction& load,
                           const Vec& u0_full, double tau, int steps,
                           int stride) {
  if (!(tau > 0.0))
    throw ConfigError("reference_solve: tau must be positive");
  Eigen::SimplicialLDLT<SpMat> solver(SpMat(sys.M_int + tau * sys.A_int));
  if (solver.info() != Eigen::Success)
    throw NumericError("reference_solve: factorization of M + tau A failed");

  Vec u = sys.restrict_interior(u0_full);
  Trajectory traj;
  traj.stride = stride;
  traj.records.push_back(make_record(sys, 0, 0.0, u,
                                     std::numeric_limits<double>::infinity()));
  traj.snapshots.push_back(sys.prolong(u));
  for (int n = 0; n < steps; ++n) {
    const double t_next = (n + 1) * tau;
    const Vec rhs =
        sys.M_int * u + tau * sys.restrict_interior(load(t_next));
    u = solver.solve(rhs);
    traj.records.push_back(make_record(
        sys, n + 1, t_next, u, std::numeric_limits<double>::infinity()));
    if ((n + 1) % stride == 0 || n + 1 == steps)
      traj.snapshots.push_back(sys.prolong(u));
  }
  return traj;
}

Trajectory forward_euler_solve(const FineSystem& sys, const LoadFunction& load,
                               const Vec& u0_full, double tau, int steps,
                               int stride) {
  if (!(tau > 0.0))
    throw ConfigError("forward_euler_solve: tau must be positive");
  Eigen::SimplicialLDLT<SpMat> mass(sys.M_int);
  if (mass.info() != Eigen::Success)
    throw NumericError("forward_euler_solve: mass factorization failed");

  Vec u = sys.restrict_interior(u0_full);
  const double u0_norm = std::sqrt(std::max(0.0, u.dot(sys.M_int * u)));
  const double threshold = 1e6 * std::max(u0_norm, 1.0);

  Trajectory traj;
  traj.stride = stride;
  traj.records.push_back(make_record(sys, 0, 0.0, u, threshold));
  traj.snapshots.push_back(sys.prolong(u));
  for (int n = 0; n < steps; ++n) {
    const double t = n * tau;
    const Vec rhs = sys.M_int * u -
                    tau * (sys.A_int * u - sys.restrict_interior(load(t)));
    u = mass.solve(rhs);
    traj.records.push_back(make_record(sys, n + 1, (n + 1) * tau, u, threshold));
    if ((n + 1) % stride == 0 || n + 1 == steps)
      traj.snapshots.push_back(sys.prolong(u));
    if (traj.records.back().blowup)
      break; // keep the flagged record; no point integrating further
  }
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write trajectory csv: " + path);
  out << "step,time,l2_norm,energy_norm,monitor_E,blowup_flag\n";
  char buf[160];
  for (const auto& r : traj.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", r.step,
                  r.time, r.l2, r.energy, r.monitor, r.blowup ? 1 : 0);
    out << buf;
  }
}

} // namespace pexfem
