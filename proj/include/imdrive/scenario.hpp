#pragma once

#include <optional>
#include <string>
#include <vector>

namespace imdrive {

struct ProfilePoint {
    double t = 0.0;
    double value = 0.0;
};

/// Linear interpolation between breakpoints, clamped to the end values
/// outside the breakpoint range. Breakpoint times strictly increasing.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<ProfilePoint> points);

    double at(double t) const;
    const std::vector<ProfilePoint>& points() const { return points_; }

private:
    std::vector<ProfilePoint> points_;
};

/// Each breakpoint's value holds until the next breakpoint time.
class PiecewiseConstant {
public:
    PiecewiseConstant() = default;
    explicit PiecewiseConstant(std::vector<ProfilePoint> points);

    double at(double t) const;
    const std::vector<ProfilePoint>& points() const { return points_; }

private:
    std::vector<ProfilePoint> points_;
};

/// A named speed/load test case. Speeds are mechanical rad/s.
struct Scenario {
    std::string name;
    std::string description;
    double duration = 0.0;  // s
    PiecewiseLinear speed_reference;
    PiecewiseConstant load_torque;

    void validate() const;
};

/// The five stock test cases: trapezoidal tracking, constant speed/load,
/// load steps, speed steps, and combined speed/load steps.
const std::vector<Scenario>& builtin_scenarios();

/// Short step-to-120-rad/s case used as the default tuning objective.
Scenario default_tuning_scenario();

/// Look up by name among the builtin scenarios plus the tuning scenario.
std::optional<Scenario> find_scenario(const std::string& name);

/// All resolvable scenario names, for diagnostics.
std::vector<std::string> scenario_names();

} // namespace imdrive
