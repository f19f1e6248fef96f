#pragma once

#include "imdrive/inverter.hpp"

#include <array>

namespace imdrive {

/// Band-plus-dead-zone settings for the three-level hysteresis comparator.
/// The band logic tracks with a systematic offset of about (band +
/// dead_zone)/2, which tilts the realized current vector, so the default
/// band is kept small relative to the operating currents.
struct HysteresisConfig {
    double band = 0.6;        // h, A
    double dead_zone = 0.06;  // delta, A; 0 < delta < band

    void validate() const;
};

struct PhaseHccState {
    PoleLevel last_output = PoleLevel::Zero;
    double last_error = 0.0;
};

/// One comparator update for a single phase. error = i_ref - i_meas; the
/// error trend ce is taken against the previous call. Clauses:
///   e >= h           -> +1        e <= -h          -> -1
///   0 < e <= delta   ->  0        -delta <= e < 0  ->  0
///   delta < e < h    -> +1 if falling, 0 if rising, hold if flat
///   -h < e < -delta  -> -1 if rising, 0 if falling, hold if flat
/// e == 0 and exact ties hold the previous output. A level change is
/// additionally limited to one step so the leg never swings directly
/// between the positive and negative bus.
std::pair<PoleLevel, PhaseHccState> phase_step(const PhaseHccState& state, double error,
                                               const HysteresisConfig& cfg);

using HccStates = std::array<PhaseHccState, 3>;

std::pair<PoleLevels, HccStates> three_phase_step(const HccStates& states,
                                                  const std::array<double, 3>& errors,
                                                  const HysteresisConfig& cfg);

} // namespace imdrive
