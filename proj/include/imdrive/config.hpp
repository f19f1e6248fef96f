#pragma once

#include "imdrive/fuzzy.hpp"
#include "imdrive/pso.hpp"
#include "imdrive/sim.hpp"

#include <iosfwd>
#include <string>

namespace imdrive {

/// Everything a CLI run needs: plant and loop settings, speed-controller
/// parameters, swarm settings, and the scenario/tuning selection. Loaded
/// from an INI-style file with one section per module; every field has a
/// usable default.
struct RunConfig {
    DriveConfig drive;
    FuzzyParams fuzzy = FuzzyParams::baseline();
    SwarmConfig swarm = fuzzy_swarm_config();
    std::string scenario;   // empty = choose on the command line
    double horizon = 0.5;   // tuning horizon, s
};

/// Parse and validate. Throws ConfigError with the offending line number.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Flat 9-field record (k1, k2, k3, a1, a2, b1, b2, c1, c2), one
/// `key = value` line each. All nine fields required on load.
FuzzyParams load_params_file(const std::string& path);
void write_params_file(const FuzzyParams& params, const std::string& path);

} // namespace imdrive
