#include "pexfem/experiments.hpp"

#include <Eigen/SparseCholesky>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

namespace pexfem {

CellField kappa_from_config(const ExperimentConfig& cfg) {
  switch (cfg.kappa_source) {
  case KappaSource::Streaks:
    return generate_streak_field(cfg.mesh_n, cfg.kappa_background,
                                 cfg.kappa_streak, cfg.streak_seed,
                                 cfg.streak_density);
  case KappaSource::File:
    return load_cell_field(cfg.kappa_file, cfg.mesh_n);
  case KappaSource::Constant:
    return make_cell_field(cfg.mesh_n,
                           Vec::Constant(cfg.mesh_n * cfg.mesh_n,
                                         cfg.kappa_constant));
  }
  throw ConfigError("unreachable kappa source");
}

Vec load_from_config(const ExperimentConfig& cfg, const FineMesh& mesh) {
  switch (cfg.source_kind) {
  case SourceKind::Constant:
    return assemble_load_constant(mesh, cfg.source_value);
  case SourceKind::Point: {
    int node;
    if (cfg.source_node == "center") {
      node = mesh.node_index(mesh.n / 2, mesh.n / 2);
    } else {
      try {
        node = std::stoi(cfg.source_node);
      } catch (const std::exception&) {
        throw ConfigError("source_node must be 'center' or a node index");
      }
    }
    return assemble_load_point(mesh, node, cfg.source_value);
  }
  case SourceKind::Grid:
    return assemble_load_grid(mesh, load_cell_field(cfg.source_file, mesh.n));
  }
  throw ConfigError("unreachable source kind");
}

Vec initial_from_config(const ExperimentConfig& cfg, const FineMesh& mesh) {
  Vec u0 = Vec::Zero(mesh.node_count());
  if (cfg.initial == InitialKind::Random) {
    std::mt19937_64 rng(cfg.initial_seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int v = 0; v < mesh.node_count(); ++v)
      if (!mesh.is_boundary_node(v))
        u0[v] = dist(rng);
  }
  return u0;
}

Workspace build_workspace(const ExperimentConfig& cfg) {
  return build_workspace(cfg, kappa_from_config(cfg));
}

Workspace build_workspace(const ExperimentConfig& cfg, CellField kappa) {
  Workspace ws;
  ws.mesh = build_fine_mesh(cfg.mesh_n);
  ws.sys = build_fine_system(ws.mesh, std::move(kappa));
  ws.decomp = build_coarse_decomposition(ws.mesh, cfg.coarse_N, cfg.layers);
  ws.sform = build_sform(ws.sys, ws.decomp, cfg.ktilde);
  ws.aux = solve_aux_spectral(ws.sys, ws.decomp, ws.sform, cfg.L);
  ws.V1 = build_cem_basis(ws.sys, ws.decomp, ws.sform, ws.aux, cfg.layers);
  if (cfg.v2_choice == V2Choice::First) {
    V2FirstResult r = build_v2_first(ws.sys, ws.decomp, ws.sform, ws.aux, cfg.J);
    ws.V2 = std::move(r.basis);
    ws.v2_tails = std::move(r.gamma_tail);
    ws.v2_shortfall = r.shortfall;
  } else {
    V2SecondResult r = build_v2_second(ws.sys, ws.decomp, ws.sform, ws.aux,
                                       cfg.J, cfg.layers, cfg.v2_global);
    ws.V2 = std::move(r.basis);
    ws.v2_tails = std::move(r.gamma_tail);
    ws.v2_shortfall = r.shortfall;
  }
  ws.v2_pruned = prune_dependent_columns(ws.V2, ws.sys.M);
  return ws;
}

ConstantsReport workspace_report(const Workspace& ws, double omega) {
  return build_constants_report(ws.sys, ws.decomp, ws.V1, ws.V2, ws.v2_tails,
                                ws.v2_shortfall, omega);
}

double resolve_tau(const ExperimentConfig& cfg, const ConstantsReport& report) {
  switch (cfg.tau_mode) {
  case TauSelect::Fixed:
    return cfg.tau;
  case TauSelect::Thm32:
    return report.tau_thm32;
  case TauSelect::Thm33:
    return report.tau_thm33;
  }
  throw ConfigError("unreachable tau mode");
}

namespace {

double rel_error(double num, double denom) {
  if (denom <= 0.0)
    return num <= 1e-300 ? 0.0 : num;
  return num / denom;
}

std::pair<double, double> errors_vs(const FineSystem& sys, const Vec& u,
                                    const Vec& ref, double ref_l2,
                                    double ref_en) {
  const Vec d = u - ref;
  const double l2 = std::sqrt(std::max(0.0, d.dot(sys.M.mat * d)));
  const double en = std::sqrt(std::max(0.0, d.dot(sys.A.mat * d)));
  return {rel_error(l2, ref_l2), rel_error(en, ref_en)};
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory: " + dir);
}

char fmt_buf[512];

} // namespace

RunExampleResult run_example(const ExperimentConfig& cfg, bool write_outputs) {
  Workspace ws = build_workspace(cfg);
  RunExampleResult out;
  out.report = workspace_report(ws, cfg.omega);
  out.tau = resolve_tau(cfg, out.report);

  const Vec F = load_from_config(cfg, ws.mesh);
  const Vec u0 = initial_from_config(cfg, ws.mesh);
  const int steps = cfg.steps;

  // Fine reference: backward Euler at the same time step.
  const Trajectory ref =
      reference_solve(ws.sys, constant_load(F), u0, out.tau, steps, 1);

  // (a) implicit in the CEM space only, (b) fully implicit enriched,
  // (c) partially explicit enriched.
  const ReducedSystem red_cem = reduce(ws.sys, ws.V1, nullptr, F);
  const ReducedSystem red_full = reduce(ws.sys, ws.V1, &ws.V2, F);

  SchemeConfig sc_implicit{Scheme::ImplicitCoarse, 0.0, cfg.omega, out.tau,
                           steps};
  SchemeConfig sc_partial{Scheme::PartialExplicit, 0.0, cfg.omega, out.tau,
                          steps};

  const Trajectory t_cem =
      SplitStepper(red_cem, sc_implicit).run(init_split(red_cem, ws.sys, u0), 1);
  const Trajectory t_impl =
      SplitStepper(red_full, sc_implicit).run(init_split(red_full, ws.sys, u0), 1);
  const Trajectory t_part =
      SplitStepper(red_full, sc_partial).run(init_split(red_full, ws.sys, u0), 1);

  auto method_u = [&](const Trajectory& t, int n) -> const Vec* {
    if (n < static_cast<int>(t.snapshots.size()))
      return &t.snapshots[n];
    return nullptr; // blew up before step n
  };

  const double inf = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= steps; n += cfg.record_stride) {
    const Vec& uref = ref.snapshots[n];
    const double ref_l2 = ref.records[n].l2;
    const double ref_en = ref.records[n].energy;
    std::array<double, 6> row{inf, inf, inf, inf, inf, inf};
    const Trajectory* ts[3] = {&t_cem, &t_impl, &t_part};
    for (int m = 0; m < 3; ++m) {
      if (const Vec* u = method_u(*ts[m], n)) {
        const auto [el2, een] = errors_vs(ws.sys, *u, uref, ref_l2, ref_en);
        row[2 * m] = el2;
        row[2 * m + 1] = een;
      }
    }
    out.series.step.push_back(n);
    out.series.time.push_back(n * out.tau);
    out.series.err.push_back(row);
  }

  if (write_outputs) {
    ensure_dir(cfg.output_dir);
    out.csv_path = cfg.output_dir + "/errors.csv";
    write_error_series_csv(out.series, out.csv_path);
    write_trajectory_csv(t_part, cfg.output_dir + "/trajectory_partial.csv");
    if (cfg.dump_bases) {
      dump_basis(ws.V1, cfg.output_dir + "/basis_V1.txt");
      dump_basis(ws.V2, cfg.output_dir + "/basis_V2.txt");
    }
  }
  return out;
}

void write_error_series_csv(const ErrorSeries& series,
                            const std::string& path) {
  std::ofstream outf(path);
  if (!outf)
    throw IoError("cannot write error series csv: " + path);
  outf << "step,time,err_L2_cem,err_en_cem,err_L2_implicit_extra,"
          "err_en_implicit_extra,err_L2_partial,err_en_partial\n";
  for (size_t i = 0; i < series.step.size(); ++i) {
    const auto& e = series.err[i];
    std::snprintf(fmt_buf, sizeof fmt_buf,
                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  series.step[i], series.time[i], e[0], e[1], e[2], e[3], e[4],
                  e[5]);
    outf << fmt_buf;
  }
}

std::vector<SweepRow> contrast_sweep(const ExperimentConfig& cfg,
                                     const std::vector<double>& contrasts,
                                     bool write_outputs) {
  if (contrasts.size() < 2)
    throw ConfigError("contrast sweep needs at least two contrast values");
  std::vector<SweepRow> rows;
  for (double contrast : contrasts) {
    ExperimentConfig c = cfg;
    c.kappa_streak = c.kappa_background * contrast;
    const CellField kappa = kappa_from_config(c);

    c.v2_choice = V2Choice::First;
    Workspace ws1 = build_workspace(c, kappa);
    const ConstantsReport rep1 = workspace_report(ws1, cfg.omega);

    c.v2_choice = V2Choice::Second;
    Workspace ws2 = build_workspace(c, kappa);
    const ConstantsReport rep2 = workspace_report(ws2, cfg.omega);

    SweepRow row;
    row.contrast = contrast;
    row.supG_V1 = rep1.supG_V1;
    row.supG_V2_first = rep1.supG_V2;
    row.supG_V2_second = rep2.supG_V2;
    row.gamma = rep1.gamma;
    row.beta = rep1.beta;
    row.tau_thm32 = rep1.tau_thm32;
    row.tau_thm33 = rep1.tau_thm33;
    rows.push_back(row);
  }
  if (write_outputs) {
    ensure_dir(cfg.output_dir);
    write_sweep_csv(rows, cfg.output_dir + "/constants.csv");
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream outf(path);
  if (!outf)
    throw IoError("cannot write constants csv: " + path);
  outf << "contrast,supG_V1,supG_V2_first,supG_V2_second,gamma,beta,"
          "tau_thm32,tau_thm33\n";
  for (const auto& r : rows) {
    std::snprintf(fmt_buf, sizeof fmt_buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.contrast, r.supG_V1, r.supG_V2_first, r.supG_V2_second,
                  r.gamma, r.beta, r.tau_thm32, r.tau_thm33);
    outf << fmt_buf;
  }
}

namespace {

double energy_error(const FineSystem& sys, const Vec& u, const Vec& uh) {
  const Vec d = u - uh;
  return std::sqrt(std::max(0.0, d.dot(sys.A.mat * d)));
}

double weighted_l2_error(const SymOperator& Mk, const Vec& u, const Vec& uh) {
  const Vec d = u - uh;
  return std::sqrt(std::max(0.0, d.dot(Mk.mat * d)));
}

// Galerkin solve on the span of the given columns.
Vec galerkin(const FineSystem& sys, const Mat& cols, const Vec& F) {
  const Mat Ar = cols.transpose() * (sys.A.mat * cols);
  const Vec Fr = cols.transpose() * F;
  Eigen::LDLT<Mat> ldlt(Ar);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("elliptic study: reduced stiffness factorization failed");
  return cols * ldlt.solve(Fr);
}

double loglog_slope(const std::vector<double>& H,
                    const std::vector<double>& err) {
  const size_t n = H.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(H[i]), y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

EllipticReport elliptic_study(const ExperimentConfig& cfg, bool write_outputs) {
  EllipticReport report;

  const FineMesh mesh = build_fine_mesh(cfg.mesh_n);
  FineSystem sys = build_fine_system(mesh, kappa_from_config(cfg));
  const SymOperator Mk = assemble_weighted_mass(mesh, sys.kappa);
  const Vec F = load_from_config(cfg, mesh);

  // Fine solution of a(u,v) = (f,v).
  Eigen::SimplicialLDLT<SpMat> fine(sys.A_int);
  if (fine.info() != Eigen::Success)
    throw NumericError("elliptic study: fine stiffness factorization failed");
  const Vec u_fine = sys.prolong(fine.solve(sys.restrict_interior(F)));

  std::vector<double> Hs, errs_cem, errs_first, errs_second;
  for (int N : cfg.elliptic_N) {
    ExperimentConfig c = cfg;
    c.coarse_N = N;

    c.v2_choice = V2Choice::First;
    Workspace w1 = build_workspace(c, sys.kappa);
    c.v2_choice = V2Choice::Second;
    Workspace w2 = build_workspace(c, sys.kappa);

    const Vec u_cem = galerkin(sys, w1.V1.cols, F);
    Mat joint1(mesh.node_count(), w1.V1.size() + w1.V2.size());
    joint1 << w1.V1.cols, w1.V2.cols;
    const Vec u_first = galerkin(sys, joint1, F);
    Mat joint2(mesh.node_count(), w2.V1.size() + w2.V2.size());
    joint2 << w2.V1.cols, w2.V2.cols;
    const Vec u_second = galerkin(sys, joint2, F);

    EllipticRow row;
    row.N = N;
    row.H = 1.0 / N;
    row.err_a_cem = energy_error(sys, u_fine, u_cem);
    row.err_a_first = energy_error(sys, u_fine, u_first);
    row.err_a_second = energy_error(sys, u_fine, u_second);
    row.err_wl2_cem = weighted_l2_error(Mk, u_fine, u_cem);
    row.err_wl2_first = weighted_l2_error(Mk, u_fine, u_first);
    row.err_wl2_second = weighted_l2_error(Mk, u_fine, u_second);
    row.theta_first =
        row.err_a_cem > 0 ? row.err_a_first / row.err_a_cem : 0.0;
    row.theta_second =
        row.err_a_cem > 0 ? row.err_a_second / row.err_a_cem : 0.0;
    report.rows.push_back(row);

    Hs.push_back(row.H);
    errs_cem.push_back(row.err_a_cem);
    errs_first.push_back(row.err_a_first);
    errs_second.push_back(row.err_a_second);
  }

  if (Hs.size() >= 2) {
    report.slope_cem = loglog_slope(Hs, errs_cem);
    report.slope_first = loglog_slope(Hs, errs_first);
    report.slope_second = loglog_slope(Hs, errs_second);
  }

  if (write_outputs) {
    ensure_dir(cfg.output_dir);
    std::ofstream outf(cfg.output_dir + "/elliptic.csv");
    if (!outf)
      throw IoError("cannot write elliptic csv");
    outf << "N,H,err_a_cem,err_a_first,err_a_second,err_wl2_cem,"
            "err_wl2_first,err_wl2_second,theta_first,theta_second\n";
    for (const auto& r : report.rows) {
      std::snprintf(fmt_buf, sizeof fmt_buf,
                    "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    r.N, r.H, r.err_a_cem, r.err_a_first, r.err_a_second,
                    r.err_wl2_cem, r.err_wl2_first, r.err_wl2_second,
                    r.theta_first, r.theta_second);
      outf << fmt_buf;
    }
  }
  return report;
}

std::vector<std::string> assemble_check(const ExperimentConfig& cfg) {
  std::vector<std::string> lines;
  const FineMesh mesh = build_fine_mesh(cfg.mesh_n);
  FineSystem sys = build_fine_system(mesh, kappa_from_config(cfg));

  auto check = [&](bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    if (!ok)
      throw NumericError("assemble check failed: " + what);
  };

  check(sys.A.asymmetry() <= 1e-12, "stiffness symmetric to 1e-12");
  check(sys.M.asymmetry() <= 1e-12, "mass symmetric to 1e-12");
  const Vec ones = Vec::Ones(mesh.node_count());
  const double a1 = (sys.A.mat * ones).cwiseAbs().maxCoeff();
  check(a1 <= 1e-12 * sys.A.mat.coeffs().cwiseAbs().maxCoeff(),
        "stiffness annihilates constants");
  const double vol = ones.dot(sys.M.mat * ones);
  check(std::abs(vol - 1.0) <= 1e-12, "mass row sums integrate to |domain|");
  check(static_cast<int>(mesh.interior_nodes().size()) ==
            (mesh.n - 1) * (mesh.n - 1),
        "interior node count");

  const CoarseDecomposition decomp =
      build_coarse_decomposition(mesh, cfg.coarse_N, cfg.layers);
  const Vec pou = decomp.chi * Vec::Ones(decomp.coarse_node_count());
  double worst = 0.0;
  for (int v = 0; v < mesh.node_count(); ++v)
    worst = std::max(worst, std::abs(pou[v] - 1.0));
  check(worst <= 1e-12, "partition of unity sums to 1");
  lines.push_back("contrast " + std::to_string(sys.kappa.contrast()));
  return lines;
}

} // namespace pexfem
