// Command-line front end for the pexfem shared library. Talks to the solver
// exclusively through the C API in pexfem/pexfem.h.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pexfem/pexfem.h"

namespace {

struct ConfigDeleter {
  void operator()(pexfem_config* c) const { pexfem_config_destroy(c); }
};
struct ReportDeleter {
  void operator()(pexfem_report* r) const { pexfem_report_destroy(r); }
};
using ConfigPtr = std::unique_ptr<pexfem_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<pexfem_report, ReportDeleter>;

int exit_code(pexfem_status st) {
  if (st == PEXFEM_OK)
    return 0;
  std::fprintf(stderr, "error: %s\n", pexfem_last_error());
  return st == PEXFEM_ERR_CONFIG ? 2 : 3;
}

ConfigPtr make_config(const std::string& config_path,
                      const std::vector<std::string>& sets,
                      pexfem_status& st) {
  pexfem_config* raw = nullptr;
  st = pexfem_config_create(&raw);
  ConfigPtr cfg(raw);
  if (st != PEXFEM_OK)
    return cfg;
  if (!config_path.empty()) {
    st = pexfem_config_load(cfg.get(), config_path.c_str());
    if (st != PEXFEM_OK)
      return cfg;
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                   kv.c_str());
      st = PEXFEM_ERR_CONFIG;
      return cfg;
    }
    st = pexfem_config_set(cfg.get(), kv.substr(0, eq).c_str(),
                           kv.substr(eq + 1).c_str());
    if (st != PEXFEM_OK)
      return cfg;
  }
  return cfg;
}

void print_report(const pexfem_report* rep) {
  char key[128];
  for (size_t i = 0; i < pexfem_report_size(rep); ++i) {
    double value = 0.0;
    if (pexfem_report_key(rep, i, key, sizeof key) == PEXFEM_OK &&
        pexfem_report_get(rep, key, &value) == PEXFEM_OK)
      std::printf("%-32s %.10g\n", key, value);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pexfem: partially explicit multiscale FEM for high-contrast "
               "parabolic diffusion"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto add_config_opts = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key-value config file");
    cmd->add_option("--set", sets, "override a config key (key=value)");
    return cmd;
  };

  auto* cmd_check = add_config_opts(
      app.add_subcommand("assemble-check", "validate mesh/operator assembly"));
  auto* cmd_spaces = add_config_opts(app.add_subcommand(
      "build-spaces", "build spaces and print the stability constants"));
  auto* cmd_run = add_config_opts(app.add_subcommand(
      "run", "run the reference and the three coarse methods, write errors"));
  auto* cmd_sweep = add_config_opts(app.add_subcommand(
      "sweep", "contrast sweep of the stability constants"));
  auto* cmd_elliptic = add_config_opts(app.add_subcommand(
      "elliptic", "elliptic projection study with H-sweep"));
  auto* cmd_plot = app.add_subcommand("plot", "render a CSV as an SVG chart");

  std::string plot_in, plot_out;
  cmd_plot->add_option("--in", plot_in, "input csv")->required();
  cmd_plot->add_option("--out", plot_out, "output svg")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_plot->parsed())
    return exit_code(pexfem_plot(plot_in.c_str(), plot_out.c_str()));

  pexfem_status st = PEXFEM_OK;
  ConfigPtr cfg = make_config(config_path, sets, st);
  if (st != PEXFEM_OK)
    return exit_code(st);

  pexfem_report* rep_raw = nullptr;
  if (cmd_check->parsed()) {
    st = pexfem_assemble_check(cfg.get());
    if (st == PEXFEM_OK)
      std::printf("assemble-check: all checks passed\n");
  } else if (cmd_spaces->parsed()) {
    st = pexfem_build_spaces(cfg.get(), &rep_raw);
  } else if (cmd_run->parsed()) {
    st = pexfem_run_example(cfg.get(), &rep_raw);
  } else if (cmd_sweep->parsed()) {
    st = pexfem_sweep(cfg.get(), &rep_raw);
  } else if (cmd_elliptic->parsed()) {
    st = pexfem_elliptic(cfg.get(), &rep_raw);
  }

  ReportPtr rep(rep_raw);
  if (st == PEXFEM_OK && rep)
    print_report(rep.get());
  return exit_code(st);
}
