#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace imdrive {

struct Bound {
    double lo = 0.0;
    double hi = 1.0;
};

/// Global-best PSO with linearly decaying inertia, box constraints and
/// optional strict-ordering repair between coordinate pairs.
struct SwarmConfig {
    int n_max = 100;   // maximum generations
    int n_pop = 30;    // particles
    int n_var = 9;     // dimensions
    double c1 = 0.5;   // cognitive acceleration
    double c2 = 1.25;  // social acceleration
    double w_max = 0.9;
    double w_min = 0.4;
    int stall_generations = 20;
    double function_tolerance = 1e-6;
    std::uint64_t seed = 1;
    std::vector<Bound> bounds;  // one per dimension
    // pairs (lo_index, hi_index) repaired so x[hi_index] > x[lo_index]
    std::vector<std::pair<int, int>> ordered_pairs;
    double velocity_clamp = 0.2;  // fraction of each dimension's range
    int threads = 1;              // 0 = hardware concurrency

    /// Structural checks (sizes, bounds ordering). Throws on violation.
    void validate() const;
};

/// The 9-dimensional swarm setup for the fuzzy-controller parameters:
/// k1 in [0, 6.67e-3], k2 in [0, 1], k3 in [0, 6], peaks in [0, 1] with
/// a2 > a1, b2 > b1, c2 > c1.
SwarmConfig fuzzy_swarm_config();

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness = 0.0;
};

struct StabilityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Convergence conditions 0 < c1+c2 < 4 and (c1+c2)/2 - 1 < w < 1, the
/// latter checked over the whole inertia schedule.
StabilityReport check_stability(const SwarmConfig& cfg);

/// w_max - (w_max - w_min)/n_max * n
double inertia_weight(int n, const SwarmConfig& cfg);

/// v' = w*v + c1*r1.(p_best - x) + c2*r2.(g_best - x), componentwise, then
/// clamped to +/- velocity_clamp * range per dimension.
std::vector<double> update_velocity(const Particle& p, const std::vector<double>& g_best,
                                    double w, const std::vector<double>& r1,
                                    const std::vector<double>& r2, const SwarmConfig& cfg);

/// x' = x + v', then clamp to bounds and repair ordering pairs.
std::vector<double> update_position(const Particle& p, const std::vector<double>& velocity,
                                    const SwarmConfig& cfg);

/// Clamp to bounds and enforce x[hi] > x[lo] for every ordered pair (swap,
/// then nudge upward by 1e-6 on ties).
void repair_position(std::vector<double>& x, const SwarmConfig& cfg);

using Objective = std::function<double(const std::vector<double>&)>;

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double inertia = 0.0;
};

struct OptimizeResult {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::vector<GenerationStats> history;  // one row per executed generation
    bool stalled = false;                  // terminated by the stall criterion
};

/// Run the swarm: uniform random initialization within bounds (zero initial
/// velocities), per-generation evaluate / update bests / move, stopping at
/// n_max generations or when the mean absolute change of the global best
/// fitness over the last stall_generations falls below function_tolerance.
/// Deterministic for a given (cfg.seed, objective); objective evaluations
/// may run on cfg.threads threads.
OptimizeResult optimize(const Objective& objective, const SwarmConfig& cfg);

/// Columns: generation,best_f,mean_f,w
void write_history_csv(const std::vector<GenerationStats>& history, const std::string& path);

} // namespace imdrive
