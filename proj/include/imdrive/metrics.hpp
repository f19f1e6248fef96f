#pragma once

#include "imdrive/scenario.hpp"
#include "imdrive/sim.hpp"

#include <span>
#include <string>

namespace imdrive {

struct Metrics {
    double iae = 0.0;
    double itae = 0.0;
    double rise_time = 0.0;            // s, 10% -> 90% of the first reference step
    double overshoot_pct = 0.0;        // peak positive tracking error / reference scale
    double steady_state_error = 0.0;   // rad/s, mean over the final 20% window
    double speed_ripple = 0.0;         // rad/s peak-to-peak, final 20% window
    double torque_ripple = 0.0;        // N m peak-to-peak, final 20% window
    double mean_switching_frequency = 0.0;  // Hz per phase
};

struct ErrorIntegrals {
    double iae = 0.0;
    double itae = 0.0;
};

/// Sum |e_k| dt and |e_k| t_k dt over uniformly spaced samples. This is the
/// one accumulation used both for the optimizer fitness and for the trace
/// metrics, so the two agree bit for bit.
ErrorIntegrals accumulate_error_integrals(std::span<const double> times,
                                          std::span<const double> errors, double dt);

/// Throws std::invalid_argument when the trace is too short to analyse.
Metrics compute_metrics(const Trace& trace, const Scenario& scenario);

std::string metrics_to_json(const Metrics& m);
void write_metrics_json(const Metrics& m, const std::string& path);

} // namespace imdrive
