#include "imdrive/inverter.hpp"

#include <cstdlib>
#include <stdexcept>

namespace imdrive {

void InverterConfig::validate() const {
    if (!(v_dc > 0.0))
        throw std::invalid_argument("inverter: v_dc must be > 0");
}

double pole_voltage(PoleLevel level, const InverterConfig& cfg) {
    return 0.5 * cfg.v_dc * level_value(level);
}

LineVoltages line_voltages(const PoleLevels& levels, const InverterConfig& cfg) {
    const double va = pole_voltage(levels[0], cfg);
    const double vb = pole_voltage(levels[1], cfg);
    const double vc = pole_voltage(levels[2], cfg);
    return {va - vb, vb - vc, vc - va};
}

std::array<double, 3> phase_voltages(const PoleLevels& levels, const InverterConfig& cfg) {
    const int a = level_value(levels[0]);
    const int b = level_value(levels[1]);
    const int c = level_value(levels[2]);
    // v_xn = v_xo - (v_ao + v_bo + v_co)/3 written with integer numerators;
    // the three integers sum to zero, so the phases cancel exactly.
    return {cfg.v_dc * (2 * a - b - c) / 6.0, cfg.v_dc * (2 * b - a - c) / 6.0,
            cfg.v_dc * (2 * c - a - b) / 6.0};
}

TransitionReport audit_transition(const PoleLevels& prev, const PoleLevels& next) {
    TransitionReport r;
    for (int ph = 0; ph < 3; ++ph) {
        const int d = level_value(next[ph]) - level_value(prev[ph]);
        r.switched[ph] = d != 0 ? 1 : 0;
        r.illegal[ph] = std::abs(d) == 2;
    }
    return r;
}

void TransitionAuditor::record(const PoleLevels& levels) {
    if (primed_) {
        const TransitionReport r = audit_transition(last_, levels);
        for (int ph = 0; ph < 3; ++ph) {
            events_[ph] += r.switched[ph];
            if (r.illegal[ph])
                ++illegal_;
        }
    }
    last_ = levels;
    primed_ = true;
}

} // namespace imdrive
