#pragma once

#include "pexfem/cem.hpp"
#include "pexfem/config.hpp"
#include "pexfem/constants.hpp"
#include "pexfem/v2.hpp"

namespace pexfem {

/// Everything the experiments need, built once from a config: system,
/// decomposition, aux space, CEM space and the configured V2 space.
struct Workspace {
  FineMesh mesh;
  FineSystem sys;
  CoarseDecomposition decomp;
  SForm sform;
  AuxSpace aux;
  SubspaceBasis V1;
  SubspaceBasis V2;
  std::vector<double> v2_tails;
  int v2_shortfall = 0;
  int v2_pruned = 0;
};

CellField kappa_from_config(const ExperimentConfig& cfg);
Vec load_from_config(const ExperimentConfig& cfg, const FineMesh& mesh);
Vec initial_from_config(const ExperimentConfig& cfg, const FineMesh& mesh);

Workspace build_workspace(const ExperimentConfig& cfg);
Workspace build_workspace(const ExperimentConfig& cfg, CellField kappa);

ConstantsReport workspace_report(const Workspace& ws, double omega);

/// Resolves the run time step: the configured tau, or a Theorem 3.2/3.3
/// recommendation computed from the workspace constants.
double resolve_tau(const ExperimentConfig& cfg, const ConstantsReport& report);

/// Per-step relative errors of the three coarse methods against the fine
/// backward-Euler reference.
struct ErrorSeries {
  std::vector<int> step;
  std::vector<double> time;
  // columns: L2/energy for cem-only, implicit enriched, partially explicit
  std::vector<std::array<double, 6>> err;

  std::array<double, 6> final_errors() const { return err.back(); }
};

struct RunExampleResult {
  ErrorSeries series;
  ConstantsReport report;
  double tau = 0.0;
  std::string csv_path;
};

RunExampleResult run_example(const ExperimentConfig& cfg,
                             bool write_outputs = true);

struct SweepRow {
  double contrast = 0.0;
  double supG_V1 = 0.0, supG_V2_first = 0.0, supG_V2_second = 0.0;
  double gamma = 0.0, beta = 0.0;
  double tau_thm32 = 0.0, tau_thm33 = 0.0;
};

std::vector<SweepRow> contrast_sweep(const ExperimentConfig& cfg,
                                     const std::vector<double>& contrasts,
                                     bool write_outputs = true);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

/// Elliptic projection study: Galerkin errors in V1 and the enriched
/// spaces, realized reduction factors, and an H-sweep slope.
struct EllipticRow {
  int N = 0;
  double H = 0.0;
  double err_a_cem = 0.0;          // ||u - u_{H,1}||_a
  double err_a_first = 0.0;        // enriched with first-choice V2
  double err_a_second = 0.0;       // enriched with second-choice V2
  double err_wl2_cem = 0.0;        // ||kappa^(1/2)(u - u_H)||
  double err_wl2_first = 0.0;
  double err_wl2_second = 0.0;
  double theta_first = 0.0;
  double theta_second = 0.0;
};

struct EllipticReport {
  std::vector<EllipticRow> rows;
  double slope_cem = 0.0; // log-log fit of err_a_cem against H
  double slope_first = 0.0;
  double slope_second = 0.0;
};

EllipticReport elliptic_study(const ExperimentConfig& cfg,
                              bool write_outputs = true);

void write_error_series_csv(const ErrorSeries& series, const std::string& path);

/// Structural self-checks of the assembled operators and decomposition
/// (symmetry, kernel, partition of unity, coloring). Returns human-readable
/// lines; throws on failure.
std::vector<std::string> assemble_check(const ExperimentConfig& cfg);

} // namespace pexfem
