#include "imdrive/pso.hpp"

#include "imdrive/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace imdrive {

void SwarmConfig::validate() const {
    if (n_max < 1)
        throw std::invalid_argument("pso: n_max must be >= 1");
    if (n_pop < 2)
        throw std::invalid_argument("pso: n_pop must be >= 2");
    if (n_var < 1)
        throw std::invalid_argument("pso: n_var must be >= 1");
    if (static_cast<int>(bounds.size()) != n_var)
        throw std::invalid_argument("pso: bounds must have n_var entries");
    for (const Bound& b : bounds)
        if (!(b.lo < b.hi))
            throw std::invalid_argument("pso: each bound needs lo < hi");
    for (const auto& [lo, hi] : ordered_pairs)
        if (lo < 0 || hi < 0 || lo >= n_var || hi >= n_var || lo == hi)
            throw std::invalid_argument("pso: ordered pair indices out of range");
    if (stall_generations < 1)
        throw std::invalid_argument("pso: stall_generations must be >= 1");
    if (!(function_tolerance >= 0.0))
        throw std::invalid_argument("pso: function_tolerance must be >= 0");
    if (!(velocity_clamp > 0.0))
        throw std::invalid_argument("pso: velocity_clamp must be > 0");
}

SwarmConfig fuzzy_swarm_config() {
    SwarmConfig cfg;
    cfg.n_var = 9;
    cfg.bounds = {
        {0.0, FuzzyParams::k1_max},  // k1
        {0.0, FuzzyParams::k2_max},  // k2
        {0.0, FuzzyParams::k3_max},  // k3
        {0.0, 1.0},                  // a1
        {0.0, 1.0},                  // a2
        {0.0, 1.0},                  // b1
        {0.0, 1.0},                  // b2
        {0.0, 1.0},                  // c1
        {0.0, 1.0},                  // c2
    };
    cfg.ordered_pairs = {{3, 4}, {5, 6}, {7, 8}};
    return cfg;
}

StabilityReport check_stability(const SwarmConfig& cfg) {
    StabilityReport report;
    const double sum = cfg.c1 + cfg.c2;
    if (!(sum > 0.0 && sum < 4.0)) {
        report.ok = false;
        report.violations.push_back("acceleration sum c1 + c2 = " + std::to_string(sum) +
                                    " outside (0, 4)");
    }
    const double w_lo = std::min(cfg.w_min, cfg.w_max);
    const double w_hi = std::max(cfg.w_min, cfg.w_max);
    const double lower = sum / 2.0 - 1.0;
    if (!(lower < w_lo)) {
        report.ok = false;
        report.violations.push_back("inertia w = " + std::to_string(w_lo) +
                                    " violates (c1+c2)/2 - 1 = " + std::to_string(lower) +
                                    " < w");
    }
    if (!(w_hi < 1.0)) {
        report.ok = false;
        report.violations.push_back("inertia w = " + std::to_string(w_hi) + " violates w < 1");
    }
    return report;
}

double inertia_weight(int n, const SwarmConfig& cfg) {
    return cfg.w_max - (cfg.w_max - cfg.w_min) / cfg.n_max * n;
}

std::vector<double> update_velocity(const Particle& p, const std::vector<double>& g_best,
                                    double w, const std::vector<double>& r1,
                                    const std::vector<double>& r2, const SwarmConfig& cfg) {
    std::vector<double> v(p.velocity.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        v[d] = w * p.velocity[d] + cfg.c1 * r1[d] * (p.best_position[d] - p.position[d]) +
               cfg.c2 * r2[d] * (g_best[d] - p.position[d]);
        const double v_max = cfg.velocity_clamp * (cfg.bounds[d].hi - cfg.bounds[d].lo);
        v[d] = std::clamp(v[d], -v_max, v_max);
    }
    return v;
}

void repair_position(std::vector<double>& x, const SwarmConfig& cfg) {
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = std::clamp(x[d], cfg.bounds[d].lo, cfg.bounds[d].hi);
    for (const auto& [lo, hi] : cfg.ordered_pairs) {
        if (x[hi] < x[lo])
            std::swap(x[hi], x[lo]);
        if (x[hi] == x[lo]) {
            x[hi] += 1e-6;
            if (x[hi] > cfg.bounds[hi].hi) {
                x[hi] = cfg.bounds[hi].hi;
                x[lo] = x[hi] - 1e-6;
            }
        }
    }
}

std::vector<double> update_position(const Particle& p, const std::vector<double>& velocity,
                                    const SwarmConfig& cfg) {
    std::vector<double> x(p.position.size());
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = p.position[d] + velocity[d];
    repair_position(x, cfg);
    return x;
}

namespace {

// 53-bit mantissa draw; keeps runs reproducible across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void evaluate_all(const Objective& objective, const std::vector<Particle>& particles,
                  std::vector<double>& fitness, int threads) {
    const int n = static_cast<int>(particles.size());
    if (threads == 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, n);
    if (threads == 1) {
        for (int i = 0; i < n; ++i)
            fitness[i] = objective(particles[i].position);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads)
                fitness[i] = objective(particles[i].position);
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace

OptimizeResult optimize(const Objective& objective, const SwarmConfig& cfg) {
    cfg.validate();
    const StabilityReport stability = check_stability(cfg);
    if (!stability.ok) {
        std::string msg = "pso: unstable configuration";
        for (const auto& v : stability.violations)
            msg += "; " + v;
        throw std::invalid_argument(msg);
    }

    // One RNG stream per particle so parallel evaluation order cannot
    // perturb the draw sequence.
    std::vector<std::mt19937_64> streams;
    streams.reserve(cfg.n_pop);
    for (int i = 0; i < cfg.n_pop; ++i) {
        std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(i)};
        streams.emplace_back(seq);
    }

    std::vector<Particle> particles(cfg.n_pop);
    for (int i = 0; i < cfg.n_pop; ++i) {
        Particle& p = particles[i];
        p.position.resize(cfg.n_var);
        for (int d = 0; d < cfg.n_var; ++d) {
            const Bound& b = cfg.bounds[d];
            p.position[d] = b.lo + (b.hi - b.lo) * uniform01(streams[i]);
        }
        repair_position(p.position, cfg);
        p.velocity.assign(cfg.n_var, 0.0);
        p.best_position = p.position;
        p.best_fitness = std::numeric_limits<double>::infinity();
    }

    OptimizeResult result;
    result.best_fitness = std::numeric_limits<double>::infinity();
    result.best_position = particles[0].position;

    std::vector<double> fitness(cfg.n_pop);
    std::vector<double> g_best_history;
    std::vector<double> r1(cfg.n_var), r2(cfg.n_var);

    for (int n = 0; n < cfg.n_max; ++n) {
        evaluate_all(objective, particles, fitness, cfg.threads);

        // deterministic sequential reduction in particle order
        double mean = 0.0;
        for (int i = 0; i < cfg.n_pop; ++i) {
            mean += fitness[i];
            Particle& p = particles[i];
            if (fitness[i] < p.best_fitness) {
                p.best_fitness = fitness[i];
                p.best_position = p.position;
            }
            if (fitness[i] < result.best_fitness) {
                result.best_fitness = fitness[i];
                result.best_position = p.position;
            }
        }
        mean /= cfg.n_pop;

        const double w = inertia_weight(n, cfg);
        result.history.push_back({n, result.best_fitness, mean, w});
        g_best_history.push_back(result.best_fitness);

        if (static_cast<int>(g_best_history.size()) > cfg.stall_generations) {
            double change = 0.0;
            const std::size_t last = g_best_history.size() - 1;
            for (int k = 0; k < cfg.stall_generations; ++k)
                change += std::abs(g_best_history[last - k] - g_best_history[last - k - 1]);
            change /= cfg.stall_generations;
            if (change < cfg.function_tolerance) {
                result.stalled = true;
                break;
            }
        }
        if (n == cfg.n_max - 1)
            break;

        for (int i = 0; i < cfg.n_pop; ++i) {
            Particle& p = particles[i];
            for (int d = 0; d < cfg.n_var; ++d) {
                r1[d] = uniform01(streams[i]);
                r2[d] = uniform01(streams[i]);
            }
            p.velocity = update_velocity(p, result.best_position, w, r1, r2, cfg);
            p.position = update_position(p, p.velocity, cfg);
        }
    }
    return result;
}

void write_history_csv(const std::vector<GenerationStats>& history, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << "generation,best_f,mean_f,w\n";
    char buf[160];
    for (const GenerationStats& g : history) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", g.generation, g.best_fitness,
                      g.mean_fitness, g.inertia);
        out << buf;
    }
}

} // namespace imdrive
