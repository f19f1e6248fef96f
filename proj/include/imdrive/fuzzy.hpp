#pragma once

#include <array>
#include <utility>
#include <vector>

namespace imdrive {

/// The nine tunable controller parameters, in their canonical order
/// (k1, k2, k3, a1, a2, b1, b2, c1, c2). k1/k2 scale error and error trend
/// into [-1, 1], k3 scales the inference output into a torque increment,
/// the pairs are the interior peak positions of the three membership
/// families.
struct FuzzyParams {
    double k1 = 5.0e-3;
    double k2 = 1.0;
    double k3 = 2.0;
    double a1 = 0.3;
    double a2 = 0.7;
    double b1 = 0.1;
    double b2 = 0.5;
    double c1 = 0.3;
    double c2 = 0.7;

    static constexpr double k1_max = 6.67e-3;
    static constexpr double k2_max = 1.0;
    static constexpr double k3_max = 6.0;

    /// Throws std::invalid_argument naming the violated bound.
    void validate() const;

    std::array<double, 9> flat() const;
    static FuzzyParams from_flat(const std::array<double, 9>& v);

    /// Untuned reference parameter set used as the comparison baseline.
    static FuzzyParams baseline() { return FuzzyParams{}; }
};

enum class Label : int { NB = 0, NM, NS, Z, PS, PM, PB };

using Degrees = std::array<double, 7>;

/// Seven triangular sets over [-1, 1] with peaks at
/// (-1, -p2, -p1, 0, p1, p2, 1); each interior triangle's feet sit at the
/// adjacent peaks, NB/PB saturate beyond -/+1. Mirror-symmetric by
/// construction, including in floating point.
class MembershipFamily {
public:
    MembershipFamily(double p1, double p2);

    double membership(int set, double x) const;
    Degrees fuzzify(double x) const;

    double peak(int set) const { return peaks_[set]; }

private:
    std::array<double, 7> peaks_;
};

/// 7x7 rule matrix indexed [ce_label][e_label].
struct RuleTable {
    std::array<std::array<Label, 7>, 7> out;

    Label rule(Label e, Label ce) const {
        return out[static_cast<int>(ce)][static_cast<int>(e)];
    }
};

/// The speed-control rule base (diagonal-symmetric matrix shared by both
/// inputs).
const RuleTable& speed_rule_table();

/// clamp(value * gain, -1, 1); gain must be >= 0.
double normalize(double value, double gain);

/// Per-rule min of the antecedent degrees, aggregated per output label by
/// max over the 49 rules.
Degrees infer(const Degrees& e_degrees, const Degrees& ce_degrees, const RuleTable& table);

/// Number of points of the centroid discretization grid over [-1, 1].
inline constexpr int kDefuzzGridPoints = 2001;

/// Centroid of the clipped-and-aggregated output sets on the uniform
/// 2001-point grid. Returns 0 when no output set is active. The grid and
/// the summation are symmetric about 0, so mirrored inputs produce an
/// exactly negated result.
double defuzzify(const Degrees& output_degrees, const MembershipFamily& family);

/// Speed-loop memory: previous error sample and the accumulated torque
/// command the fuzzy increments integrate into.
struct ControllerState {
    double last_error = 0.0;         // rad/s
    double accumulated_output = 0.0; // N m
};

/// One speed-loop sample: e = ref - meas, ce = e - e_prev, run the
/// normalize/fuzzify/infer/defuzzify pipeline and accumulate k3*du into the
/// torque command, clamped to +/- torque_limit.
std::pair<double, ControllerState> controller_step(const ControllerState& state,
                                                   double speed_ref, double speed_meas,
                                                   const FuzzyParams& params,
                                                   double torque_limit = 400.0);

/// Same pipeline with the output-set grid memberships precomputed; produces
/// bit-identical results to the free functions. Use one instance per set of
/// parameters when stepping in a loop.
class FuzzyController {
public:
    explicit FuzzyController(const FuzzyParams& params, double torque_limit = 400.0);

    /// du for already-normalized inputs.
    double increment(double e_norm, double ce_norm) const;

    std::pair<double, ControllerState> step(const ControllerState& state, double speed_ref,
                                            double speed_meas) const;

    const FuzzyParams& params() const { return params_; }
    double torque_limit() const { return torque_limit_; }

private:
    FuzzyParams params_;
    double torque_limit_;
    MembershipFamily error_family_;
    MembershipFamily trend_family_;
    MembershipFamily output_family_;
    std::vector<std::array<double, 7>> output_grid_;  // [grid point][set]
};

} // namespace imdrive
