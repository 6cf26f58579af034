#pragma once

#include "tst/env/couplings.hpp"
#include "tst/mc/metropolis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tst::cli {

enum class Engine { auto_, mc, binder, brute };
std::string to_string(Engine e);
Engine parse_engine(const std::string& name);

/// Everything a run needs. Parsed from a flat `key = value` document; see
/// README for the key list.
struct RunConfig {
  env::EnvironmentSpec env;
  env::ModelVariant variant = env::ModelVariant::super_local;
  /// gamma (= xi) points; filled from `gamma`, from gamma_min/max/step, or
  /// converted from `lambda`.
  std::vector<double> gamma;
  std::vector<double> lambda;
  std::vector<std::pair<int, int>> sizes;
  Engine engine = Engine::auto_;
  mc::McSchedule schedule;
  bool warm_start = false;
  std::optional<double> eta;  ///< imaginary nearest-neighbour coupling, overrides env
  double fbar_ratio = env::kOhmicFbarRatio;
  double phibar_ratio = 0.0;
  int binder_width = 12;
  int bootstrap = 200;
  std::vector<double> kernel_distances;
  std::string out_dir = "results";

  /// Echo of every key with its resolved value, one `key = value` per line.
  std::string echo() const;
};

/// Apply a config document on top of base. Unknown keys raise ParseError with
/// line and column; inconsistent values raise ValidationError naming the key.
RunConfig parse_config(const std::string& text, RunConfig base = {});

/// Checks that cut across keys (engine versus coupling type, grid order, ...).
void validate_config(RunConfig& cfg);

/// Preset file path for a name, searched in the build's preset directory and ./presets.
std::string preset_path(const std::string& name);
std::string read_file(const std::string& path);

} // namespace tst::cli
