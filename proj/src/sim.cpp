#include "imdrive/sim.hpp"

#include "imdrive/foc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace imdrive {

namespace {

long steps_per(double period, double dt, const char* what) {
    if (period <= 0.0)
        return 1;
    if (period < dt)
        throw std::invalid_argument(std::string("sim: ") + what + " must be >= dt");
    return std::lround(period / dt);
}

} // namespace

void LoopRates::validate() const {
    if (!(dt > 0.0) || dt > 50e-6)
        throw std::invalid_argument("sim: dt must be in (0, 50us]");
    steps_per(speed_loop_period, dt, "speed_loop_period");
    steps_per(current_loop_period, dt, "current_loop_period");
    steps_per(trace_period, dt, "trace_period");
}

void DriveConfig::validate() const {
    machine.validate();
    inverter.validate();
    hysteresis.validate();
    if (!(lambda_r_ref > 0.0))
        throw std::invalid_argument("sim: lambda_r_ref must be > 0");
    if (!(torque_limit > 0.0))
        throw std::invalid_argument("sim: torque_limit must be > 0");
    rates.validate();
}

Trace run(const DriveConfig& config, const Scenario& scenario, const FuzzyParams& fuzzy_params,
          double duration_override) {
    config.validate();
    scenario.validate();

    const double dt = config.rates.dt;
    const double duration = duration_override > 0.0
                                ? std::min(duration_override, scenario.duration)
                                : scenario.duration;
    const long n_steps = std::lround(duration / dt);
    const long speed_every = steps_per(config.rates.speed_loop_period, dt, "speed_loop_period");
    const long hcc_every = steps_per(config.rates.current_loop_period, dt, "current_loop_period");
    const long trace_every = steps_per(config.rates.trace_period, dt, "trace_period");

    MachineState machine;
    FocState foc{0.0, config.lambda_r_ref};
    const FuzzyController controller(fuzzy_params, config.torque_limit);
    ControllerState ctrl;
    HccStates hcc{};
    TransitionAuditor auditor;
    PoleLevels levels{PoleLevel::Zero, PoleLevel::Zero, PoleLevel::Zero};
    CurrentRefs refs;
    double omega_sl = 0.0;
    std::array<double, 3> i_meas{};

    Trace trace;
    trace.sample_period = trace_every * dt;
    trace.duration = duration;
    trace.rows.reserve(static_cast<std::size_t>(n_steps / trace_every) + 1);

    const auto finalize = [&] {
        trace.illegal_transitions = auditor.illegal_count();
        trace.switch_events = auditor.switch_events();
    };

    for (long k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        const double speed_ref = scenario.speed_reference.at(t);
        const double load = scenario.load_torque.at(t);
        const double omega_mech = machine.omega_r / config.machine.pole_pairs;

        if (k % speed_every == 0) {
            double torque_ref;
            std::tie(torque_ref, ctrl) = controller.step(ctrl, speed_ref, omega_mech);
            refs = current_references(torque_ref, foc, config.machine);
            omega_sl = slip_frequency(refs.i_qs_ref, foc, config.machine);
        }
        const std::array<double, 3> i_ref = dq_to_abc(refs.i_ds_ref, refs.i_qs_ref, foc.theta_e);

        if (k % hcc_every == 0) {
            const std::array<double, 3> errors{i_ref[0] - i_meas[0], i_ref[1] - i_meas[1],
                                               i_ref[2] - i_meas[2]};
            std::tie(levels, hcc) = three_phase_step(hcc, errors, config.hysteresis);
            auditor.record(levels);
        }

        if (k % trace_every == 0) {
            TraceRow row;
            row.t = t;
            row.omega_ref = speed_ref;
            row.omega = omega_mech;
            row.te = electromagnetic_torque(machine, config.machine);
            row.tl = load;
            row.i_abc = i_meas;
            row.i_abc_ref = i_ref;
            row.v_ab = line_voltages(levels, config.inverter).v_ab;
            std::tie(row.lambda_dr, row.lambda_qr) =
                rotate_dq(machine.lambda_dr, machine.lambda_qr, foc.theta_e);
            row.theta_e = foc.theta_e;
            row.levels = levels;
            trace.rows.push_back(row);
        }

        const std::array<double, 3> v_pn = phase_voltages(levels, config.inverter);
        const auto [v_ds, v_qs] = abc_to_dq(v_pn, 0.0);
        try {
            machine = step(machine, v_ds, v_qs, 0.0, load, dt, config.machine);
        } catch (const DivergenceError&) {
            finalize();
            throw SimulationDiverged(t + dt, std::move(trace));
        }
        const Currents c = currents_from_fluxes(machine, config.machine);
        i_meas = dq_to_abc(c.i_ds, c.i_qs, 0.0);
        foc = advance_angle(foc, machine.omega_r, omega_sl, dt);
    }

    finalize();
    return trace;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "t,omega_ref,omega,te,tl,ia,ib,ic,ia_ref,ib_ref,ic_ref,vab,"
           "lambda_dr,lambda_qr,ua,ub,uc\n";
    char buf[512];
    for (const TraceRow& r : trace.rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                      "%d,%d,%d\n",
                      r.t, r.omega_ref, r.omega, r.te, r.tl, r.i_abc[0], r.i_abc[1], r.i_abc[2],
                      r.i_abc_ref[0], r.i_abc_ref[1], r.i_abc_ref[2], r.v_ab, r.lambda_dr,
                      r.lambda_qr, level_value(r.levels[0]), level_value(r.levels[1]),
                      level_value(r.levels[2]));
        out << buf;
    }
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_trace_csv(trace, out);
}

} // namespace imdrive
