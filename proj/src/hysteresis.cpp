#include "imdrive/hysteresis.hpp"

#include <cstdlib>
#include <stdexcept>

namespace imdrive {

void HysteresisConfig::validate() const {
    if (!(dead_zone > 0.0) || !(dead_zone < band))
        throw std::invalid_argument("hysteresis: need 0 < dead_zone < band");
}

std::pair<PoleLevel, PhaseHccState> phase_step(const PhaseHccState& state, double error,
                                               const HysteresisConfig& cfg) {
    const double h = cfg.band;
    const double dz = cfg.dead_zone;
    const double ce = error - state.last_error;

    PoleLevel out = state.last_output;  // held unless a clause fires
    if (error > 0.0) {
        if (error >= h)
            out = PoleLevel::Plus;
        else if (error <= dz)
            out = PoleLevel::Zero;
        else if (ce > 0.0)
            out = PoleLevel::Zero;
        else if (ce < 0.0)
            out = PoleLevel::Plus;
    } else if (error < 0.0) {
        if (error <= -h)
            out = PoleLevel::Minus;
        else if (error >= -dz)
            out = PoleLevel::Zero;
        else if (ce < 0.0)
            out = PoleLevel::Zero;
        else if (ce > 0.0)
            out = PoleLevel::Minus;
    }

    // never step across both bus rails in one update
    if (std::abs(level_value(out) - level_value(state.last_output)) == 2)
        out = PoleLevel::Zero;

    return {out, PhaseHccState{out, error}};
}

std::pair<PoleLevels, HccStates> three_phase_step(const HccStates& states,
                                                  const std::array<double, 3>& errors,
                                                  const HysteresisConfig& cfg) {
    PoleLevels levels;
    HccStates next;
    for (int ph = 0; ph < 3; ++ph) {
        const auto [level, st] = phase_step(states[ph], errors[ph], cfg);
        levels[ph] = level;
        next[ph] = st;
    }
    return {levels, next};
}

} // namespace imdrive
