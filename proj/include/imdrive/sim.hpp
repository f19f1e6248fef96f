#pragma once

#include "imdrive/errors.hpp"
#include "imdrive/fuzzy.hpp"
#include "imdrive/hysteresis.hpp"
#include "imdrive/inverter.hpp"
#include "imdrive/machine.hpp"
#include "imdrive/scenario.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace imdrive {

/// Execution rates of the nested loops. The machine, inverter and current
/// controller run at dt; the fuzzy speed loop and the FOC set points at
/// speed_loop_period; the trace is sampled at trace_period.
struct LoopRates {
    double dt = 2e-6;
    double speed_loop_period = 100e-6;
    double current_loop_period = 0.0;  // 0 = every integration step
    double trace_period = 100e-6;

    void validate() const;
};

/// Everything about the plant and the cascaded loops except the speed
/// controller parameters themselves.
struct DriveConfig {
    MachineParams machine;
    InverterConfig inverter;
    HysteresisConfig hysteresis;
    double lambda_r_ref = 0.96;  // Wb
    double torque_limit = 400.0; // N m, clamp on the accumulated command
    LoopRates rates;

    void validate() const;
};

struct TraceRow {
    double t = 0.0;
    double omega_ref = 0.0;  // mechanical rad/s
    double omega = 0.0;      // mechanical rad/s
    double te = 0.0;
    double tl = 0.0;
    std::array<double, 3> i_abc{};
    std::array<double, 3> i_abc_ref{};
    double v_ab = 0.0;
    double lambda_dr = 0.0;  // rotor flux in the field frame
    double lambda_qr = 0.0;
    double theta_e = 0.0;    // synchronous angle at the sample (not exported)
    PoleLevels levels{PoleLevel::Zero, PoleLevel::Zero, PoleLevel::Zero};
};

struct Trace {
    double sample_period = 0.0;
    double duration = 0.0;
    std::vector<TraceRow> rows;
    long illegal_transitions = 0;
    std::array<long, 3> switch_events{};
};

/// Divergence during a closed-loop run; carries the failure time and the
/// trace recorded up to that point.
class SimulationDiverged : public DivergenceError {
public:
    SimulationDiverged(double time, Trace partial)
        : DivergenceError("simulation diverged at t = " + std::to_string(time) + " s"),
          time_(time),
          partial_(std::move(partial)) {}

    double time() const { return time_; }
    const Trace& partial_trace() const { return partial_; }

private:
    double time_;
    Trace partial_;
};

/// Closed-loop run: fuzzy speed controller -> FOC set points -> hysteresis
/// current control -> NPC inverter -> machine, machine simulated in the
/// stationary frame. Samples rows at t = k * trace_period for t < duration.
/// duration_override, when positive, truncates the scenario.
Trace run(const DriveConfig& config, const Scenario& scenario, const FuzzyParams& fuzzy_params,
          double duration_override = 0.0);

/// Fixed column order:
/// t,omega_ref,omega,te,tl,ia,ib,ic,ia_ref,ib_ref,ic_ref,vab,lambda_dr,lambda_qr,ua,ub,uc
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::string& path);

} // namespace imdrive
