#pragma once

#include <string>

#include "mapalign/registration.hpp"
#include "mapalign/simulator.hpp"

namespace mapalign {

struct EvalOpts {
  double overlap_radius = 10.0;  // center distance defining a true match [m]
  int min_shared = 1;            // shared objects required for pose metrics
  int threads = 0;               // 0 = hardware concurrency
  bool measured_timing = false;  // false zeroes wall times in artifacts
};

struct Config {
  AlignParams align;
  ScenarioConfig scenario;
  EvalOpts eval;
};

/// Parses a JSON config with sections "affinity", "solver", "alignment",
/// "scenario", "eval". Absent sections and keys keep their defaults; unknown
/// keys raise std::invalid_argument.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);
std::string config_to_json(const Config& cfg);

/// Applies a comma-separated list of key=value overrides, e.g.
/// "fusion=product,use_gravity=false,N=60". Unknown keys or unparsable values
/// raise std::invalid_argument.
void apply_ablation(Config& cfg, const std::string& spec);

}  // namespace mapalign
