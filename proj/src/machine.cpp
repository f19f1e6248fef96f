#include "imdrive/machine.hpp"

#include "imdrive/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imdrive {

void MachineParams::validate() const {
    if (!(r_s > 0.0) || !(r_r > 0.0))
        throw std::invalid_argument("machine: resistances must be > 0");
    if (!(l_ls > 0.0) || !(l_lr > 0.0) || !(l_m > 0.0))
        throw std::invalid_argument("machine: inductances must be > 0");
    if (pole_pairs < 1)
        throw std::invalid_argument("machine: pole_pairs must be >= 1");
    if (!(inertia > 0.0))
        throw std::invalid_argument("machine: inertia must be > 0");
    if (friction < 0.0)
        throw std::invalid_argument("machine: friction must be >= 0");
    const double s = sigma();
    if (!(s > 0.0) || !(s < 1.0))
        throw std::invalid_argument("machine: leakage coefficient sigma outside (0,1)");
}

double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0)
        theta += two_pi;
    return theta;
}

Currents currents_from_fluxes(const MachineState& state, const MachineParams& params) {
    const double ls = params.l_s();
    const double lr = params.l_r();
    const double lm = params.l_m;
    const double det = ls * lr - lm * lm;
    if (!(det > 0.0))
        throw std::invalid_argument("machine: singular inductance matrix");
    const double inv = 1.0 / det;
    Currents c;
    c.i_ds = (lr * state.lambda_ds - lm * state.lambda_dr) * inv;
    c.i_dr = (ls * state.lambda_dr - lm * state.lambda_ds) * inv;
    c.i_qs = (lr * state.lambda_qs - lm * state.lambda_qr) * inv;
    c.i_qr = (ls * state.lambda_qr - lm * state.lambda_qs) * inv;
    return c;
}

double electromagnetic_torque(const MachineState& state, const MachineParams& params) {
    const Currents c = currents_from_fluxes(state, params);
    return 1.5 * params.pole_pairs * params.l_m * (c.i_qs * c.i_dr - c.i_ds * c.i_qr);
}

namespace {

// d/dt of (lambda_ds, lambda_qs, lambda_dr, lambda_qr, omega_r, theta_r).
using StateVec = std::array<double, 6>;

StateVec to_vec(const MachineState& s) {
    return {s.lambda_ds, s.lambda_qs, s.lambda_dr, s.lambda_qr, s.omega_r, s.theta_r};
}

MachineState from_vec(const StateVec& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

StateVec derivative(const StateVec& y, double v_ds, double v_qs, double omega_frame,
                    double load_torque, const MachineParams& p) {
    MachineState s = from_vec(y);
    const Currents c = currents_from_fluxes(s, p);
    const double slip = omega_frame - s.omega_r;

    StateVec d;
    d[0] = v_ds - p.r_s * c.i_ds + omega_frame * s.lambda_qs;
    d[1] = v_qs - p.r_s * c.i_qs - omega_frame * s.lambda_ds;
    d[2] = -p.r_r * c.i_dr + slip * s.lambda_qr;
    d[3] = -p.r_r * c.i_qr - slip * s.lambda_dr;

    const double te = 1.5 * p.pole_pairs * p.l_m * (c.i_qs * c.i_dr - c.i_ds * c.i_qr);
    const double omega_mech = s.omega_r / p.pole_pairs;
    // torque balance is mechanical; omega_r state is electrical
    d[4] = p.pole_pairs * (te - load_torque - p.friction * omega_mech) / p.inertia;
    d[5] = s.omega_r;
    return d;
}

} // namespace

MachineState step(const MachineState& state, double v_ds, double v_qs, double omega_frame,
                  double load_torque, double dt, const MachineParams& params) {
    if (!(dt > 0.0) || dt > 50e-6)
        throw std::invalid_argument("machine: dt must be in (0, 50us]");

    const StateVec y0 = to_vec(state);
    const auto f = [&](const StateVec& y) {
        return derivative(y, v_ds, v_qs, omega_frame, load_torque, params);
    };

    const StateVec k1 = f(y0);
    StateVec y1, y2, y3;
    for (int i = 0; i < 6; ++i)
        y1[i] = y0[i] + 0.5 * dt * k1[i];
    const StateVec k2 = f(y1);
    for (int i = 0; i < 6; ++i)
        y2[i] = y0[i] + 0.5 * dt * k2[i];
    const StateVec k3 = f(y2);
    for (int i = 0; i < 6; ++i)
        y3[i] = y0[i] + dt * k3[i];
    const StateVec k4 = f(y3);

    StateVec y;
    for (int i = 0; i < 6; ++i)
        y[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    for (double v : y)
        if (!std::isfinite(v))
            throw DivergenceError("machine state became non-finite");

    MachineState next = from_vec(y);
    next.theta_r = wrap_angle(next.theta_r);
    return next;
}

} // namespace imdrive
