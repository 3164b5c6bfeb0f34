#include "pexfem/pexfem.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "pexfem/experiments.hpp"
#include "pexfem/svg.hpp"

using namespace pexfem;

struct pexfem_config {
  ExperimentConfig cfg;
};

struct pexfem_report {
  std::vector<std::pair<std::string, double>> entries;

  void add(const std::string& key, double value) {
    entries.emplace_back(key, value);
  }
};

namespace {

thread_local std::string g_last_error;

pexfem_status fail(pexfem_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

template <typename Fn>
pexfem_status guarded(Fn&& fn) {
  try {
    fn();
    return PEXFEM_OK;
  } catch (const ConfigError& e) {
    return fail(PEXFEM_ERR_CONFIG, e.what());
  } catch (const IoError& e) {
    return fail(PEXFEM_ERR_IO, e.what());
  } catch (const NumericError& e) {
    return fail(PEXFEM_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(PEXFEM_ERR_NUMERIC, e.what());
  } catch (...) {
    return fail(PEXFEM_ERR_NUMERIC, "unknown exception");
  }
}

ExperimentConfig finalized(const pexfem_config* cfg) {
  ExperimentConfig c = cfg->cfg;
  finalize_config(c);
  return c;
}

void fill_constants(pexfem_report& rep, const ConstantsReport& r,
                    const std::string& prefix = "") {
  rep.add(prefix + "contrast", r.contrast);
  rep.add(prefix + "gamma", r.gamma);
  rep.add(prefix + "beta", r.beta);
  rep.add(prefix + "supG_V1", r.supG_V1);
  rep.add(prefix + "supG_V2", r.supG_V2);
  for (int c = 0; c < 4; ++c)
    rep.add(prefix + "supG_color_" + std::to_string(c), r.supG_color[c]);
  rep.add(prefix + "max_tail", r.max_tail);
  rep.add(prefix + "tau_thm32", r.tau_thm32);
  rep.add(prefix + "tau_thm33", r.tau_thm33);
  rep.add(prefix + "shortfall", r.shortfall);
}

} // namespace

extern "C" {

const char* pexfem_version(void) { return "0.1.0"; }

const char* pexfem_last_error(void) { return g_last_error.c_str(); }

pexfem_status pexfem_config_create(pexfem_config** out) {
  if (!out)
    return fail(PEXFEM_ERR_ARGUMENT, "config_create: null output pointer");
  return guarded([&] { *out = new pexfem_config(); });
}

pexfem_status pexfem_config_load(pexfem_config* cfg, const char* path) {
  if (!cfg || !path)
    return fail(PEXFEM_ERR_ARGUMENT, "config_load: null argument");
  return guarded([&] { cfg->cfg = load_config(path); });
}

pexfem_status pexfem_config_set(pexfem_config* cfg, const char* key,
                                const char* value) {
  if (!cfg || !key || !value)
    return fail(PEXFEM_ERR_ARGUMENT, "config_set: null argument");
  return guarded([&] { apply_config_kv(cfg->cfg, key, value); });
}

void pexfem_config_destroy(pexfem_config* cfg) { delete cfg; }

pexfem_status pexfem_assemble_check(const pexfem_config* cfg) {
  if (!cfg)
    return fail(PEXFEM_ERR_ARGUMENT, "assemble_check: null config");
  return guarded([&] { assemble_check(finalized(cfg)); });
}

pexfem_status pexfem_build_spaces(const pexfem_config* cfg,
                                  pexfem_report** out) {
  if (!cfg)
    return fail(PEXFEM_ERR_ARGUMENT, "build_spaces: null config");
  return guarded([&] {
    const ExperimentConfig c = finalized(cfg);
    Workspace ws = build_workspace(c);
    const ConstantsReport rep = workspace_report(ws, c.omega);
    if (c.dump_bases) {
      std::error_code ec;
      std::filesystem::create_directories(c.output_dir, ec);
      dump_basis(ws.V1, c.output_dir + "/basis_V1.txt");
      dump_basis(ws.V2, c.output_dir + "/basis_V2.txt");
    }
    if (out) {
      auto* r = new pexfem_report();
      fill_constants(*r, rep);
      r->add("dofs_V1", ws.V1.size());
      r->add("dofs_V2", ws.V2.size());
      *out = r;
    }
  });
}

pexfem_status pexfem_run_example(const pexfem_config* cfg,
                                 pexfem_report** out) {
  if (!cfg)
    return fail(PEXFEM_ERR_ARGUMENT, "run_example: null config");
  return guarded([&] {
    const ExperimentConfig c = finalized(cfg);
    const RunExampleResult res = run_example(c);
    if (out) {
      auto* r = new pexfem_report();
      r->add("tau", res.tau);
      const auto fin = res.series.final_errors();
      r->add("final_err_L2_cem", fin[0]);
      r->add("final_err_en_cem", fin[1]);
      r->add("final_err_L2_implicit_extra", fin[2]);
      r->add("final_err_en_implicit_extra", fin[3]);
      r->add("final_err_L2_partial", fin[4]);
      r->add("final_err_en_partial", fin[5]);
      fill_constants(*r, res.report);
      *out = r;
    }
  });
}

pexfem_status pexfem_sweep(const pexfem_config* cfg, pexfem_report** out) {
  if (!cfg)
    return fail(PEXFEM_ERR_ARGUMENT, "sweep: null config");
  return guarded([&] {
    const ExperimentConfig c = finalized(cfg);
    const auto rows = contrast_sweep(c, c.contrasts);
    if (out) {
      auto* r = new pexfem_report();
      r->add("rows", static_cast<double>(rows.size()));
      for (size_t i = 0; i < rows.size(); ++i) {
        const std::string p = "row" + std::to_string(i) + "_";
        r->add(p + "contrast", rows[i].contrast);
        r->add(p + "supG_V1", rows[i].supG_V1);
        r->add(p + "supG_V2_first", rows[i].supG_V2_first);
        r->add(p + "supG_V2_second", rows[i].supG_V2_second);
        r->add(p + "gamma", rows[i].gamma);
        r->add(p + "beta", rows[i].beta);
        r->add(p + "tau_thm32", rows[i].tau_thm32);
        r->add(p + "tau_thm33", rows[i].tau_thm33);
      }
      *out = r;
    }
  });
}

pexfem_status pexfem_elliptic(const pexfem_config* cfg, pexfem_report** out) {
  if (!cfg)
    return fail(PEXFEM_ERR_ARGUMENT, "elliptic: null config");
  return guarded([&] {
    const ExperimentConfig c = finalized(cfg);
    const EllipticReport rep = elliptic_study(c);
    if (out) {
      auto* r = new pexfem_report();
      r->add("rows", static_cast<double>(rep.rows.size()));
      r->add("slope_cem", rep.slope_cem);
      r->add("slope_first", rep.slope_first);
      r->add("slope_second", rep.slope_second);
      for (size_t i = 0; i < rep.rows.size(); ++i) {
        const std::string p = "row" + std::to_string(i) + "_";
        const auto& row = rep.rows[i];
        r->add(p + "H", row.H);
        r->add(p + "err_a_cem", row.err_a_cem);
        r->add(p + "err_a_first", row.err_a_first);
        r->add(p + "err_a_second", row.err_a_second);
        r->add(p + "theta_first", row.theta_first);
        r->add(p + "theta_second", row.theta_second);
      }
      *out = r;
    }
  });
}

pexfem_status pexfem_plot(const char* csv_path, const char* svg_path) {
  if (!csv_path || !svg_path)
    return fail(PEXFEM_ERR_ARGUMENT, "plot: null path");
  return guarded([&] { plot_csv(csv_path, svg_path); });
}

size_t pexfem_report_size(const pexfem_report* rep) {
  return rep ? rep->entries.size() : 0;
}

pexfem_status pexfem_report_key(const pexfem_report* rep, size_t index,
                                char* buffer, size_t buffer_size) {
  if (!rep || !buffer || buffer_size == 0)
    return fail(PEXFEM_ERR_ARGUMENT, "report_key: null argument");
  if (index >= rep->entries.size())
    return fail(PEXFEM_ERR_ARGUMENT, "report_key: index out of range");
  const std::string& key = rep->entries[index].first;
  std::strncpy(buffer, key.c_str(), buffer_size - 1);
  buffer[buffer_size - 1] = '\0';
  return PEXFEM_OK;
}

pexfem_status pexfem_report_get(const pexfem_report* rep, const char* key,
                                double* out) {
  if (!rep || !key || !out)
    return fail(PEXFEM_ERR_ARGUMENT, "report_get: null argument");
  for (const auto& [k, v] : rep->entries)
    if (k == key) {
      *out = v;
      return PEXFEM_OK;
    }
  return fail(PEXFEM_ERR_ARGUMENT,
              ("report_get: no such key '" + std::string(key) + "'").c_str());
}

void pexfem_report_destroy(pexfem_report* rep) { delete rep; }

} // extern "C"
