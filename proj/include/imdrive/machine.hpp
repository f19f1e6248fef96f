#pragma once

#include <array>

namespace imdrive {

/// Squirrel-cage induction machine constants, dq model.
/// l_s/l_r totals are leakage + mutual; sigma() must stay in (0,1) for the
/// flux-current relations to be invertible.
struct MachineParams {
    double r_s = 0.087;       // stator resistance, ohm
    double r_r = 0.228;       // rotor resistance, ohm
    double l_ls = 0.8e-3;     // stator leakage inductance, H
    double l_lr = 0.8e-3;     // rotor leakage inductance, H
    double l_m = 34.7e-3;     // mutual inductance, H
    int pole_pairs = 2;
    double inertia = 1.662;   // kg m^2
    double friction = 0.0;    // viscous coefficient, N m s/rad

    double l_s() const { return l_ls + l_m; }
    double l_r() const { return l_lr + l_m; }
    double sigma() const { return 1.0 - l_m * l_m / (l_s() * l_r()); }

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

/// Machine state with flux linkages as the integrated variables.
/// omega_r and theta_r are electrical quantities; mechanical speed is
/// omega_r / pole_pairs.
struct MachineState {
    double lambda_ds = 0.0;
    double lambda_qs = 0.0;
    double lambda_dr = 0.0;
    double lambda_qr = 0.0;
    double omega_r = 0.0;  // electrical rad/s
    double theta_r = 0.0;  // electrical rad, kept in [0, 2pi)
};

struct Currents {
    double i_ds = 0.0;
    double i_qs = 0.0;
    double i_dr = 0.0;
    double i_qr = 0.0;
};

/// Invert the per-axis flux-inductance relations (2x2 solve per axis).
Currents currents_from_fluxes(const MachineState& state, const MachineParams& params);

/// 1.5 * pole_pairs * l_m * (i_qs*i_dr - i_ds*i_qr)
double electromagnetic_torque(const MachineState& state, const MachineParams& params);

/// One fixed-step RK4 step of the electrical + mechanical dynamics.
/// v_ds, v_qs are expressed in a frame rotating at omega_frame (rad/s,
/// electrical); the inputs are held constant over the step.
/// Throws DivergenceError if the resulting state is non-finite.
MachineState step(const MachineState& state, double v_ds, double v_qs, double omega_frame,
                  double load_torque, double dt, const MachineParams& params);

double wrap_angle(double theta);  // into [0, 2pi)

} // namespace imdrive
