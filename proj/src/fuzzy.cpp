#include "imdrive/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace imdrive {

namespace {

constexpr int kGridHalf = (kDefuzzGridPoints - 1) / 2;  // 1000
constexpr double kGridStep = 1.0 / kGridHalf;

void check_range(const char* name, double v, double lo, double hi) {
    if (!(v >= lo) || !(v <= hi))
        throw std::invalid_argument(std::string("fuzzy: ") + name + " = " + std::to_string(v) +
                                    " out of range [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
}

void check_ordered(const char* lo_name, double lo, const char* hi_name, double hi) {
    if (!(hi > lo))
        throw std::invalid_argument(std::string("fuzzy: need ") + hi_name + " > " + lo_name);
}

double triangular(double x, double left, double peak, double right) {
    if (x < left || x > right)
        return 0.0;
    if (x == peak)
        return 1.0;
    if (x < peak)
        return peak > left ? (x - left) / (peak - left) : 0.0;
    return right > peak ? (right - x) / (right - peak) : 0.0;
}

} // namespace

void FuzzyParams::validate() const {
    check_range("k1", k1, 0.0, k1_max);
    check_range("k2", k2, 0.0, k2_max);
    check_range("k3", k3, 0.0, k3_max);
    check_range("a1", a1, 0.0, 1.0);
    check_range("a2", a2, 0.0, 1.0);
    check_range("b1", b1, 0.0, 1.0);
    check_range("b2", b2, 0.0, 1.0);
    check_range("c1", c1, 0.0, 1.0);
    check_range("c2", c2, 0.0, 1.0);
    check_ordered("a1", a1, "a2", a2);
    check_ordered("b1", b1, "b2", b2);
    check_ordered("c1", c1, "c2", c2);
}

std::array<double, 9> FuzzyParams::flat() const {
    return {k1, k2, k3, a1, a2, b1, b2, c1, c2};
}

FuzzyParams FuzzyParams::from_flat(const std::array<double, 9>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

MembershipFamily::MembershipFamily(double p1, double p2) {
    if (!(p1 >= 0.0) || !(p2 <= 1.0) || !(p2 > p1))
        throw std::invalid_argument("fuzzy: membership peaks need 0 <= p1 < p2 <= 1");
    peaks_ = {-1.0, -p2, -p1, 0.0, p1, p2, 1.0};
}

double MembershipFamily::membership(int set, double x) const {
    const auto& c = peaks_;
    if (set == 0) {  // NB saturates to the left
        if (x <= c[0])
            return 1.0;
        if (x >= c[1])
            return 0.0;
        return (c[1] - x) / (c[1] - c[0]);
    }
    if (set == 6) {  // PB saturates to the right
        if (x >= c[6])
            return 1.0;
        if (x <= c[5])
            return 0.0;
        return (x - c[5]) / (c[6] - c[5]);
    }
    return triangular(x, c[set - 1], c[set], c[set + 1]);
}

Degrees MembershipFamily::fuzzify(double x) const {
    Degrees d;
    for (int s = 0; s < 7; ++s)
        d[s] = membership(s, x);
    return d;
}

const RuleTable& speed_rule_table() {
    using enum Label;
    // rows: ce from NB to PB; columns: e from NB to PB
    static const RuleTable table{{{
        {{NB, NB, NB, NB, NM, NS, Z}},
        {{NB, NB, NB, NM, NS, Z, PS}},
        {{NB, NB, NM, NS, Z, PS, PM}},
        {{NB, NM, NS, Z, PS, PM, PB}},
        {{NM, NS, Z, PS, PM, PB, PB}},
        {{NS, Z, PS, PM, PB, PB, PB}},
        {{Z, PS, PM, PB, PB, PB, PB}},
    }}};
    return table;
}

double normalize(double value, double gain) {
    if (!(gain >= 0.0))
        throw std::invalid_argument("fuzzy: normalization gain must be >= 0");
    return std::clamp(value * gain, -1.0, 1.0);
}

Degrees infer(const Degrees& e_degrees, const Degrees& ce_degrees, const RuleTable& table) {
    Degrees out{};
    for (int i = 0; i < 7; ++i) {
        if (e_degrees[i] <= 0.0)
            continue;
        for (int j = 0; j < 7; ++j) {
            if (ce_degrees[j] <= 0.0)
                continue;
            const double strength = std::min(e_degrees[i], ce_degrees[j]);
            const int label = static_cast<int>(table.out[j][i]);
            out[label] = std::max(out[label], strength);
        }
    }
    return out;
}

namespace {

// Centroid over the symmetric grid. membership_at(set, k) must return the
// output set's membership at x = k * kGridStep, k in [-kGridHalf, kGridHalf].
// Grid points are paired (+k, -k) so that a mirror-symmetric aggregate has an
// exactly zero numerator and mirrored inputs negate the result exactly.
template <typename MembershipAt>
double centroid_on_grid(const Degrees& degrees, MembershipAt&& membership_at) {
    const auto aggregate = [&](int k) {
        double m = 0.0;
        for (int s = 0; s < 7; ++s) {
            if (degrees[s] <= 0.0)
                continue;
            m = std::max(m, std::min(degrees[s], membership_at(s, k)));
        }
        return m;
    };

    double den = aggregate(0);
    double num = 0.0;
    for (int k = 1; k <= kGridHalf; ++k) {
        const double x = k * kGridStep;
        const double above = aggregate(k);
        const double below = aggregate(-k);
        num += x * (above - below);
        den += above + below;
    }
    return den > 0.0 ? num / den : 0.0;
}

} // namespace

double defuzzify(const Degrees& output_degrees, const MembershipFamily& family) {
    return centroid_on_grid(output_degrees, [&](int set, int k) {
        return family.membership(set, k * kGridStep);
    });
}

std::pair<double, ControllerState> controller_step(const ControllerState& state,
                                                   double speed_ref, double speed_meas,
                                                   const FuzzyParams& params,
                                                   double torque_limit) {
    params.validate();
    FuzzyController controller(params, torque_limit);
    return controller.step(state, speed_ref, speed_meas);
}

FuzzyController::FuzzyController(const FuzzyParams& params, double torque_limit)
    : params_(params),
      torque_limit_(torque_limit),
      error_family_(params.a1, params.a2),
      trend_family_(params.b1, params.b2),
      output_family_(params.c1, params.c2),
      output_grid_(kDefuzzGridPoints) {
    params_.validate();
    for (int k = -kGridHalf; k <= kGridHalf; ++k)
        for (int s = 0; s < 7; ++s)
            output_grid_[k + kGridHalf][s] = output_family_.membership(s, k * kGridStep);
}

double FuzzyController::increment(double e_norm, double ce_norm) const {
    const Degrees e_deg = error_family_.fuzzify(e_norm);
    const Degrees ce_deg = trend_family_.fuzzify(ce_norm);
    const Degrees out = infer(e_deg, ce_deg, speed_rule_table());
    return centroid_on_grid(out,
                            [&](int set, int k) { return output_grid_[k + kGridHalf][set]; });
}

std::pair<double, ControllerState> FuzzyController::step(const ControllerState& state,
                                                         double speed_ref,
                                                         double speed_meas) const {
    const double e = speed_ref - speed_meas;
    const double ce = e - state.last_error;
    const double du = increment(normalize(e, params_.k1), normalize(ce, params_.k2));
    const double u =
        std::clamp(state.accumulated_output + params_.k3 * du, -torque_limit_, torque_limit_);
    return {u, ControllerState{e, u}};
}

} // namespace imdrive
