#include "imdrive/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace imdrive {

ErrorIntegrals accumulate_error_integrals(std::span<const double> times,
                                          std::span<const double> errors, double dt) {
    ErrorIntegrals acc;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        const double abs_e = std::abs(errors[k]);
        acc.iae += abs_e * dt;
        acc.itae += abs_e * times[k] * dt;
    }
    return acc;
}

Metrics compute_metrics(const Trace& trace, const Scenario& scenario) {
    if (trace.rows.size() < 5)
        throw std::invalid_argument("metrics: trace too short to analyse");

    Metrics m;

    std::vector<double> times, errors;
    times.reserve(trace.rows.size());
    errors.reserve(trace.rows.size());
    for (const TraceRow& r : trace.rows) {
        times.push_back(r.t);
        errors.push_back(r.omega_ref - r.omega);
    }
    const ErrorIntegrals integrals =
        accumulate_error_integrals(times, errors, trace.sample_period);
    m.iae = integrals.iae;
    m.itae = integrals.itae;

    // rise time against the first commanded level (second breakpoint when the
    // reference ramps or steps, otherwise the constant value)
    const auto& ref_points = scenario.speed_reference.points();
    const double target = ref_points.size() > 1 ? ref_points[1].value : ref_points[0].value;
    m.rise_time = trace.duration;
    if (std::abs(target) > 1e-12) {
        double t10 = -1.0;
        for (const TraceRow& r : trace.rows) {
            const double progress = r.omega / target;
            if (t10 < 0.0 && progress >= 0.1)
                t10 = r.t;
            if (t10 >= 0.0 && progress >= 0.9) {
                m.rise_time = r.t - t10;
                break;
            }
        }
    } else {
        m.rise_time = 0.0;
    }

    double peak_error = 0.0;
    for (const TraceRow& r : trace.rows)
        peak_error = std::max(peak_error, r.omega - r.omega_ref);
    double ref_scale = std::abs(scenario.speed_reference.at(trace.duration));
    if (ref_scale == 0.0)
        for (const TraceRow& r : trace.rows)
            ref_scale = std::max(ref_scale, std::abs(r.omega_ref));
    m.overshoot_pct = ref_scale > 0.0 ? 100.0 * std::max(0.0, peak_error) / ref_scale : 0.0;

    // steady-state window: final 20% of the run
    const double window_start = 0.8 * trace.duration;
    double err_sum = 0.0;
    long count = 0;
    double w_min = 0.0, w_max = 0.0, te_min = 0.0, te_max = 0.0;
    for (const TraceRow& r : trace.rows) {
        if (r.t < window_start)
            continue;
        if (count == 0) {
            w_min = w_max = r.omega;
            te_min = te_max = r.te;
        }
        err_sum += r.omega_ref - r.omega;
        w_min = std::min(w_min, r.omega);
        w_max = std::max(w_max, r.omega);
        te_min = std::min(te_min, r.te);
        te_max = std::max(te_max, r.te);
        ++count;
    }
    if (count == 0)
        throw std::invalid_argument("metrics: no samples in the steady-state window");
    m.steady_state_error = err_sum / count;
    m.speed_ripple = w_max - w_min;
    m.torque_ripple = te_max - te_min;

    const long total_events =
        trace.switch_events[0] + trace.switch_events[1] + trace.switch_events[2];
    m.mean_switching_frequency = trace.duration > 0.0
                                     ? static_cast<double>(total_events) / (3.0 * trace.duration)
                                     : 0.0;
    return m;
}

std::string metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["iae"] = m.iae;
    j["itae"] = m.itae;
    j["rise_time"] = m.rise_time;
    j["overshoot_pct"] = m.overshoot_pct;
    j["steady_state_error"] = m.steady_state_error;
    j["speed_ripple"] = m.speed_ripple;
    j["torque_ripple"] = m.torque_ripple;
    j["mean_switching_frequency"] = m.mean_switching_frequency;
    return j.dump(2) + "\n";
}

void write_metrics_json(const Metrics& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << metrics_to_json(m);
}

} // namespace imdrive
