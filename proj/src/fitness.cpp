#include "imdrive/fitness.hpp"

#include "imdrive/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace imdrive {

void FitnessSpec::validate() const {
    if (!(horizon > 0.0))
        throw std::invalid_argument("fitness: horizon must be > 0");
    scenario.validate();
    drive.validate();
}

double fitness(const FuzzyParams& params, const FitnessSpec& spec) {
    spec.validate();
    try {
        const Trace trace = run(spec.drive, spec.scenario, params, spec.horizon);
        const Metrics m = compute_metrics(trace, spec.scenario);
        return m.iae + m.itae;
    } catch (const SimulationDiverged&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace imdrive
