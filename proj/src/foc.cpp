#include "imdrive/foc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imdrive {

namespace {
constexpr double k_third = 2.0 * std::numbers::pi / 3.0;
}

CurrentRefs current_references(double torque_ref, const FocState& foc,
                               const MachineParams& params) {
    if (!(foc.lambda_r_ref > 0.0))
        throw std::invalid_argument("foc: lambda_r_ref must be > 0");
    CurrentRefs refs;
    refs.i_ds_ref = foc.lambda_r_ref / params.l_m;
    refs.i_qs_ref = 2.0 * params.l_r() * torque_ref /
                    (3.0 * params.pole_pairs * params.l_m * foc.lambda_r_ref);
    return refs;
}

double slip_frequency(double i_qs_ref, const FocState& foc, const MachineParams& params) {
    if (!(foc.lambda_r_ref > 0.0))
        throw std::invalid_argument("foc: lambda_r_ref must be > 0");
    return params.r_r * params.l_m * i_qs_ref / (params.l_r() * foc.lambda_r_ref);
}

FocState advance_angle(const FocState& foc, double omega_r_electrical, double omega_sl,
                       double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("foc: dt must be > 0");
    FocState next = foc;
    next.theta_e = wrap_angle(foc.theta_e + (omega_r_electrical + omega_sl) * dt);
    return next;
}

std::array<double, 3> dq_to_abc(double d, double q, double theta) {
    const double ca = std::cos(theta);
    const double sa = std::sin(theta);
    const double cb = std::cos(theta - k_third);
    const double sb = std::sin(theta - k_third);
    const double cc = std::cos(theta + k_third);
    const double sc = std::sin(theta + k_third);
    return {q * ca + d * sa, q * cb + d * sb, q * cc + d * sc};
}

std::pair<double, double> abc_to_dq(const std::array<double, 3>& abc, double theta) {
    const double ca = std::cos(theta);
    const double sa = std::sin(theta);
    const double cb = std::cos(theta - k_third);
    const double sb = std::sin(theta - k_third);
    const double cc = std::cos(theta + k_third);
    const double sc = std::sin(theta + k_third);
    const double q = (2.0 / 3.0) * (abc[0] * ca + abc[1] * cb + abc[2] * cc);
    const double d = (2.0 / 3.0) * (abc[0] * sa + abc[1] * sb + abc[2] * sc);
    return {d, q};
}

std::pair<double, double> rotate_dq(double d, double q, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {q * s + d * c, q * c - d * s};
}

} // namespace imdrive
