#pragma once

#include "imdrive/machine.hpp"

#include <array>

namespace imdrive {

/// Indirect field orientation: synchronous angle integrator plus the rotor
/// flux reference the set-point equations are built on.
struct FocState {
    double theta_e = 0.0;        // synchronous angle, rad, in [0, 2pi)
    double lambda_r_ref = 0.96;  // rotor flux reference, Wb
};

struct CurrentRefs {
    double i_ds_ref = 0.0;
    double i_qs_ref = 0.0;
};

/// Constant-flux set points: i_ds* = lambda_r*/l_m and i_qs* chosen so the
/// field-oriented torque expression returns exactly torque_ref.
CurrentRefs current_references(double torque_ref, const FocState& foc,
                               const MachineParams& params);

/// Slip frequency feedforward r_r*l_m*i_qs* / (l_r*lambda_r*), rad/s.
double slip_frequency(double i_qs_ref, const FocState& foc, const MachineParams& params);

/// theta_e += (omega_r_electrical + omega_sl) * dt, wrapped.
FocState advance_angle(const FocState& foc, double omega_r_electrical, double omega_sl,
                       double dt);

/// Amplitude-invariant rotating-frame transforms. Convention:
///   f_a = f_q cos(theta) + f_d sin(theta), phases b/c shifted by -/+ 120 deg.
/// abc_to_dq is the pseudo-inverse discarding any zero sequence.
std::array<double, 3> dq_to_abc(double d, double q, double theta);
std::pair<double, double> abc_to_dq(const std::array<double, 3>& abc, double theta);  // (d, q)

/// Same rotation applied between two dq frames: maps stationary-frame (d, q)
/// into a frame leading by theta.
std::pair<double, double> rotate_dq(double d, double q, double theta);

} // namespace imdrive
