#pragma once

#include <array>
#include <cstdint>

namespace imdrive {

/// Per-phase command of a three-level NPC leg: phase terminal tied to the
/// positive bus, the DC-link midpoint, or the negative bus.
enum class PoleLevel : std::int8_t {
    Minus = -1,
    Zero = 0,
    Plus = 1,
};

inline int level_value(PoleLevel l) { return static_cast<int>(l); }

using PoleLevels = std::array<PoleLevel, 3>;  // phases a, b, c

struct InverterConfig {
    double v_dc = 700.0;  // total DC link voltage, V

    void validate() const;
};

/// Pole voltage V_io: {+ -> +v_dc/2, 0 -> 0, - -> -v_dc/2}.
double pole_voltage(PoleLevel level, const InverterConfig& cfg);

struct LineVoltages {
    double v_ab = 0.0;
    double v_bc = 0.0;
    double v_ca = 0.0;
};

LineVoltages line_voltages(const PoleLevels& levels, const InverterConfig& cfg);

/// Voltages from each phase terminal to the isolated machine neutral;
/// the common mode is removed so the three always sum to zero.
std::array<double, 3> phase_voltages(const PoleLevels& levels, const InverterConfig& cfg);

struct TransitionReport {
    std::array<bool, 3> illegal{};   // phase jumped directly +1 <-> -1
    std::array<int, 3> switched{};   // 1 if the phase changed level
    bool any_illegal() const { return illegal[0] || illegal[1] || illegal[2]; }
};

/// Check one transition between consecutive switch states.
TransitionReport audit_transition(const PoleLevels& prev, const PoleLevels& next);

/// Accumulates switching statistics over a run. One auditor per simulation.
class TransitionAuditor {
public:
    /// Feed the levels applied at the next instant. The first call only
    /// latches the initial state.
    void record(const PoleLevels& levels);

    long illegal_count() const { return illegal_; }
    const std::array<long, 3>& switch_events() const { return events_; }

private:
    bool primed_ = false;
    PoleLevels last_{PoleLevel::Zero, PoleLevel::Zero, PoleLevel::Zero};
    long illegal_ = 0;
    std::array<long, 3> events_{};
};

} // namespace imdrive
