#include "pexfem/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pexfem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size())
      throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v +
                      "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size())
      throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected number, got '" + v +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "0" || v == "false" || v == "off")
    return false;
  if (v == "1" || v == "true" || v == "on")
    return true;
  throw ConfigError("config key '" + key + "': expected 0/1, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad_enum(const std::string& key, const std::string& v,
                           const char* expected) {
  throw ConfigError("config key '" + key + "': expected one of {" + expected +
                    "}, got '" + v + "'");
}

} // namespace

void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
  const std::string v = trim(value);
  if (key == "mesh_n") {
    cfg.mesh_n = parse_int(key, v);
  } else if (key == "coarse_N") {
    cfg.coarse_N = parse_int(key, v);
  } else if (key == "oversample_layers") {
    cfg.layers = parse_int(key, v);
  } else if (key == "aux_per_element") {
    cfg.L = parse_int(key, v);
  } else if (key == "v2_per_entity") {
    cfg.J = parse_int(key, v);
  } else if (key == "ktilde") {
    if (v == "kappa_h2")
      cfg.ktilde = KtildeMode::KappaH2;
    else if (v == "kappa_gradchi2")
      cfg.ktilde = KtildeMode::KappaGradChi2;
    else
      bad_enum(key, v, "kappa_h2, kappa_gradchi2");
  } else if (key == "v2_choice") {
    if (v == "first")
      cfg.v2_choice = V2Choice::First;
    else if (v == "second")
      cfg.v2_choice = V2Choice::Second;
    else
      bad_enum(key, v, "first, second");
  } else if (key == "v2_variant") {
    if (v == "localized")
      cfg.v2_global = false;
    else if (v == "global")
      cfg.v2_global = true;
    else
      bad_enum(key, v, "localized, global");
  } else if (key == "kappa") {
    if (v == "streaks")
      cfg.kappa_source = KappaSource::Streaks;
    else if (v == "file")
      cfg.kappa_source = KappaSource::File;
    else if (v == "constant")
      cfg.kappa_source = KappaSource::Constant;
    else
      bad_enum(key, v, "streaks, file, constant");
  } else if (key == "kappa_file") {
    cfg.kappa_file = v;
  } else if (key == "kappa_background") {
    cfg.kappa_background = parse_double(key, v);
  } else if (key == "kappa_streak") {
    cfg.kappa_streak = parse_double(key, v);
  } else if (key == "kappa_constant") {
    cfg.kappa_constant = parse_double(key, v);
  } else if (key == "streak_seed") {
    cfg.streak_seed = static_cast<std::uint64_t>(parse_int(key, v));
  } else if (key == "streak_density") {
    cfg.streak_density = parse_double(key, v);
  } else if (key == "source") {
    if (v == "constant")
      cfg.source_kind = SourceKind::Constant;
    else if (v == "point")
      cfg.source_kind = SourceKind::Point;
    else if (v == "grid")
      cfg.source_kind = SourceKind::Grid;
    else
      bad_enum(key, v, "constant, point, grid");
  } else if (key == "source_value") {
    cfg.source_value = parse_double(key, v);
  } else if (key == "source_node") {
    cfg.source_node = v;
  } else if (key == "source_file") {
    cfg.source_file = v;
  } else if (key == "scheme") {
    if (v == "implicit")
      cfg.scheme = Scheme::ImplicitCoarse;
    else if (v == "orthogonal")
      cfg.scheme = Scheme::OrthogonalSplit;
    else if (v == "partial_explicit")
      cfg.scheme = Scheme::PartialExplicit;
    else if (v == "general")
      cfg.scheme = Scheme::General;
    else
      bad_enum(key, v, "implicit, orthogonal, partial_explicit, general");
  } else if (key == "mu") {
    cfg.mu = parse_double(key, v);
  } else if (key == "omega") {
    cfg.omega = parse_double(key, v);
  } else if (key == "tau") {
    cfg.tau = parse_double(key, v);
    cfg.set_tau = true;
  } else if (key == "steps") {
    cfg.steps = parse_int(key, v);
    cfg.set_steps = true;
  } else if (key == "final_time") {
    cfg.final_time = parse_double(key, v);
    cfg.set_final_time = true;
  } else if (key == "tau_mode") {
    if (v == "fixed")
      cfg.tau_mode = TauSelect::Fixed;
    else if (v == "thm32")
      cfg.tau_mode = TauSelect::Thm32;
    else if (v == "thm33")
      cfg.tau_mode = TauSelect::Thm33;
    else
      bad_enum(key, v, "fixed, thm32, thm33");
  } else if (key == "initial") {
    if (v == "zero")
      cfg.initial = InitialKind::Zero;
    else if (v == "random")
      cfg.initial = InitialKind::Random;
    else
      bad_enum(key, v, "zero, random");
  } else if (key == "initial_seed") {
    cfg.initial_seed = static_cast<std::uint64_t>(parse_int(key, v));
  } else if (key == "contrasts") {
    cfg.contrasts.clear();
    for (const auto& item : split_list(v))
      cfg.contrasts.push_back(parse_double(key, item));
  } else if (key == "elliptic_N") {
    cfg.elliptic_N.clear();
    for (const auto& item : split_list(v))
      cfg.elliptic_N.push_back(parse_int(key, item));
  } else if (key == "output_dir") {
    cfg.output_dir = v;
  } else if (key == "record_stride") {
    cfg.record_stride = parse_int(key, v);
  } else if (key == "dump_bases") {
    cfg.dump_bases = parse_bool(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    apply_config_kv(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

void finalize_config(ExperimentConfig& cfg) {
  if (cfg.mesh_n < 2)
    throw ConfigError("mesh_n must be >= 2");
  if (cfg.coarse_N < 2 || cfg.mesh_n % cfg.coarse_N != 0)
    throw ConfigError("mesh_n must be a multiple of coarse_N (got " +
                      std::to_string(cfg.mesh_n) + ", " +
                      std::to_string(cfg.coarse_N) + ")");
  if (cfg.steps < 1)
    throw ConfigError("steps must be >= 1");
  if (!(cfg.tau > 0.0))
    throw ConfigError("tau must be positive");

  if (cfg.set_final_time && !cfg.set_tau) {
    cfg.tau = cfg.final_time / cfg.steps;
  } else if (cfg.set_final_time && cfg.set_tau && !cfg.set_steps) {
    const double s = cfg.final_time / cfg.tau;
    cfg.steps = static_cast<int>(std::lround(s));
    if (std::abs(s - cfg.steps) > 1e-9)
      throw ConfigError("final_time is not an integer multiple of tau");
  } else {
    const double T = cfg.tau * cfg.steps;
    if (cfg.set_final_time &&
        std::abs(T - cfg.final_time) > 1e-12 * std::max(1.0, cfg.final_time))
      throw ConfigError("tau * steps != final_time");
    cfg.final_time = T;
  }

  if (cfg.kappa_source == KappaSource::File && cfg.kappa_file.empty())
    throw ConfigError("kappa = file requires kappa_file");
  if (cfg.source_kind == SourceKind::Grid && cfg.source_file.empty())
    throw ConfigError("source = grid requires source_file");
  if (!(cfg.omega >= 0.0 && cfg.omega <= 1.0))
    throw ConfigError("omega must lie in [0,1]");
  if (cfg.mu != 0.0 && cfg.mu != 1.0)
    throw ConfigError("mu must be 0 or 1");
  if (cfg.record_stride < 1)
    throw ConfigError("record_stride must be >= 1");
}

} // namespace pexfem
