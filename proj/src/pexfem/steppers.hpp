#pragma once

#include <functional>

#include "pexfem/system.hpp"

namespace pexfem {

/// Per-step diagnostics shared by the fine reference steppers and the
/// reduced splitting schemes. `monitor` is scheme-specific (0 when unused).
struct StepRecord {
  int step = 0;
  double time = 0.0;
  double l2 = 0.0;
  double energy = 0.0;
  double monitor = 0.0;
  bool blowup = false;
};

struct Trajectory {
  std::vector<StepRecord> records;
  std::vector<Vec> snapshots; // full-length dof vectors, every `stride` steps
  int stride = 1;

  bool blew_up() const {
    return !records.empty() && records.back().blowup;
  }
  const StepRecord& final_record() const { return records.back(); }
};

/// Time-independent or time-dependent load on the full dof set.
using LoadFunction = std::function<Vec(double t)>;

LoadFunction constant_load(Vec f);

/// Backward Euler on the interior dofs: (M + tau A) u^{n+1} = M u^n + tau F(t^{n+1}).
Trajectory reference_solve(const FineSystem& sys, const LoadFunction& load,
                           const Vec& u0_full, double tau, int steps,
                           int stride = 1);

/// Forward Euler: M u^{n+1} = M u^n - tau (A u^n - F(t^n)). Instability is a
/// flag (L2 norm above 1e6 x max(||u0||,1)), not an error.
Trajectory forward_euler_solve(const FineSystem& sys, const LoadFunction& load,
                               const Vec& u0_full, double tau, int steps,
                               int stride = 1);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

} // namespace pexfem
