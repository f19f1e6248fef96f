#pragma once

#include "imdrive/fuzzy.hpp"
#include "imdrive/scenario.hpp"
#include "imdrive/sim.hpp"

namespace imdrive {

/// Closed-loop evaluation setup for the optimizer: which scenario to run,
/// for how long, and on which plant/loop configuration (the integration
/// step lives in drive.rates.dt).
struct FitnessSpec {
    Scenario scenario = default_tuning_scenario();
    double horizon = 0.5;  // s
    DriveConfig drive;

    void validate() const;
};

/// IAE + ITAE of the speed error over the horizon, accumulated at the trace
/// sampling instants. Deterministic given (params, spec). A diverging
/// simulation yields +infinity.
double fitness(const FuzzyParams& params, const FitnessSpec& spec);

} // namespace imdrive
