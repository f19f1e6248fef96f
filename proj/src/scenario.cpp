#include "imdrive/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace imdrive {

namespace {

void check_points(const std::vector<ProfilePoint>& points) {
    if (points.empty())
        throw std::invalid_argument("scenario: profile needs at least one breakpoint");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].t > points[i - 1].t))
            throw std::invalid_argument("scenario: breakpoint times must be strictly increasing");
}

} // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<ProfilePoint> points) : points_(std::move(points)) {
    check_points(points_);
}

double PiecewiseLinear::at(double t) const {
    if (t <= points_.front().t)
        return points_.front().value;
    if (t >= points_.back().t)
        return points_.back().value;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (t <= points_[i].t) {
            const ProfilePoint& a = points_[i - 1];
            const ProfilePoint& b = points_[i];
            const double frac = (t - a.t) / (b.t - a.t);
            return a.value + frac * (b.value - a.value);
        }
    }
    return points_.back().value;
}

PiecewiseConstant::PiecewiseConstant(std::vector<ProfilePoint> points)
    : points_(std::move(points)) {
    check_points(points_);
}

double PiecewiseConstant::at(double t) const {
    double v = points_.front().value;
    for (const ProfilePoint& p : points_) {
        if (t < p.t)
            break;
        v = p.value;
    }
    return v;
}

void Scenario::validate() const {
    if (!(duration > 0.0))
        throw std::invalid_argument("scenario: duration must be > 0");
    for (const auto* points : {&speed_reference.points(), &load_torque.points()}) {
        check_points(*points);
        if (points->front().t < 0.0 || points->back().t > duration)
            throw std::invalid_argument("scenario: breakpoints must lie within [0, duration]");
    }
}

const std::vector<Scenario>& builtin_scenarios() {
    // Step changes in the speed reference use a 10 ms ramp so breakpoint
    // times stay strictly increasing; load steps are true steps.
    static const std::vector<Scenario> scenarios = {
        {"trapezoid",
         "trapezoidal +/-120 rad/s speed reference with 0.5 s ramps, no load",
         3.0,
         PiecewiseLinear({{0.0, 0.0},
                          {0.5, 120.0},
                          {1.0, 120.0},
                          {1.5, 0.0},
                          {2.0, -120.0},
                          {2.5, -120.0},
                          {3.0, 0.0}}),
         PiecewiseConstant({{0.0, 0.0}})},
        {"const-120-100",
         "constant 120 rad/s reference with constant 100 N m load",
         3.0,
         PiecewiseLinear({{0.0, 120.0}}),
         PiecewiseConstant({{0.0, 100.0}})},
        {"load-steps",
         "constant 100 rad/s reference, load 50 -> 150 -> 80 N m at t = 1, 2 s",
         3.0,
         PiecewiseLinear({{0.0, 100.0}}),
         PiecewiseConstant({{0.0, 50.0}, {1.0, 150.0}, {2.0, 80.0}})},
        {"var-speed-const-torque",
         "speed 50 -> 120 -> 80 rad/s at t = 1, 2 s with constant 100 N m load",
         3.0,
         PiecewiseLinear(
             {{0.0, 50.0}, {1.0, 50.0}, {1.01, 120.0}, {2.0, 120.0}, {2.01, 80.0}}),
         PiecewiseConstant({{0.0, 100.0}})},
        {"var-speed-var-torque",
         "speed 50 -> 120 -> 80 rad/s with load 30 -> 150 -> 100 N m at t = 1, 2 s",
         3.0,
         PiecewiseLinear(
             {{0.0, 50.0}, {1.0, 50.0}, {1.01, 120.0}, {2.0, 120.0}, {2.01, 80.0}}),
         PiecewiseConstant({{0.0, 30.0}, {1.0, 150.0}, {2.0, 100.0}})},
    };
    return scenarios;
}

Scenario default_tuning_scenario() {
    return {"tune-step-120-100",
            "0.5 s step to 120 rad/s under 100 N m load (default tuning objective)",
            0.5,
            PiecewiseLinear({{0.0, 120.0}}),
            PiecewiseConstant({{0.0, 100.0}})};
}

std::optional<Scenario> find_scenario(const std::string& name) {
    for (const Scenario& s : builtin_scenarios())
        if (s.name == name)
            return s;
    if (Scenario tuning = default_tuning_scenario(); tuning.name == name)
        return tuning;
    return std::nullopt;
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> names;
    for (const Scenario& s : builtin_scenarios())
        names.push_back(s.name);
    names.push_back(default_tuning_scenario().name);
    return names;
}

} // namespace imdrive
