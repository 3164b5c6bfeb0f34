#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pexfem/aux_space.hpp"
#include "pexfem/splitting.hpp"

namespace pexfem {

enum class V2Choice { First, Second };
enum class KappaSource { Streaks, File, Constant };
enum class SourceKind { Constant, Point, Grid };
enum class TauSelect { Fixed, Thm32, Thm33 };
enum class InitialKind { Zero, Random };

/// Flat key-value experiment configuration. Unknown keys are errors; the
/// documented keys and defaults live in config.cpp next to the parser.
struct ExperimentConfig {
  int mesh_n = 100;
  int coarse_N = 10;
  int layers = 2;
  int L = 3; // aux modes per element
  int J = 3; // V2 modes per neighborhood/element
  KtildeMode ktilde = KtildeMode::KappaH2;
  V2Choice v2_choice = V2Choice::First;
  bool v2_global = false;

  KappaSource kappa_source = KappaSource::Streaks;
  std::string kappa_file;
  double kappa_background = 1.0;
  double kappa_streak = 1e6;
  double kappa_constant = 1.0;
  std::uint64_t streak_seed = 11;
  double streak_density = 0.15;

  SourceKind source_kind = SourceKind::Point;
  double source_value = 1.0;
  std::string source_node = "center";
  std::string source_file;

  Scheme scheme = Scheme::PartialExplicit;
  double mu = 0.0;
  double omega = 1.0;
  double tau = 1e-4;
  int steps = 500;
  double final_time = 0.05;
  TauSelect tau_mode = TauSelect::Fixed;
  InitialKind initial = InitialKind::Zero;
  std::uint64_t initial_seed = 1;

  std::vector<double> contrasts = {1e5, 1e6, 1e7, 1e8, 1e9};
  std::vector<int> elliptic_N = {5, 10, 20};
  std::string output_dir = "out";
  int record_stride = 1;
  bool dump_bases = false;

  // which of tau/steps/final_time the user pinned, for consistency checks
  bool set_tau = false, set_steps = false, set_final_time = false;
};

/// Applies one "key = value" assignment; throws ConfigError on unknown keys
/// or unparsable values.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

ExperimentConfig load_config(const std::string& path);

/// Resolves tau/steps/final_time and validates cross-field invariants.
void finalize_config(ExperimentConfig& cfg);

} // namespace pexfem
