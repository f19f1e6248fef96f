// imdrive: closed-loop induction motor drive simulator with an NPC inverter,
// hysteresis current control, indirect field orientation and a PSO-tunable
// fuzzy speed controller. Subcommands write CSV/JSON artifacts; everything
// is deterministic given the config file and seed.

#include "imdrive/config.hpp"
#include "imdrive/errors.hpp"
#include "imdrive/fitness.hpp"
#include "imdrive/foc.hpp"
#include "imdrive/metrics.hpp"
#include "imdrive/pso.hpp"
#include "imdrive/scenario.hpp"
#include "imdrive/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace imdrive;

struct CommonOpts {
    std::string config_path;
    std::string scenario;
    std::string params_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double dt = 0.0;
    double horizon = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scenario = true) {
    cmd->add_option("--config", o.config_path, "config file (INI-style sections)");
    if (with_scenario)
        cmd->add_option("--scenario", o.scenario, "scenario name (see list-scenarios)");
    cmd->add_option("--seed", o.seed, "RNG seed override")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--dt", o.dt, "integration step override, s");
    cmd->add_option("--horizon", o.horizon, "horizon override, s");
}

RunConfig load_config(const CommonOpts& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
    if (o.dt > 0.0)
        cfg.drive.rates.dt = o.dt;
    if (o.seed_set)
        cfg.swarm.seed = o.seed;
    if (o.horizon > 0.0)
        cfg.horizon = o.horizon;
    if (!o.scenario.empty())
        cfg.scenario = o.scenario;
    cfg.drive.validate();
    return cfg;
}

Scenario resolve_scenario(const std::string& name) {
    if (!name.empty())
        if (std::optional<Scenario> s = find_scenario(name))
            return *s;
    std::string msg = name.empty() ? "no scenario selected"
                                   : "unknown scenario '" + name + "'";
    msg += "; available:";
    for (const std::string& n : scenario_names())
        msg += " " + n;
    throw ConfigError(msg);
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
    return nlohmann::ordered_json::parse(metrics_to_json(m));
}

int cmd_simulate(const CommonOpts& opts) {
    const RunConfig cfg = load_config(opts);
    const Scenario scenario = resolve_scenario(cfg.scenario);
    FuzzyParams params = cfg.fuzzy;
    if (!opts.params_path.empty())
        params = load_params_file(opts.params_path);

    const auto out = prepare_out_dir(opts.out_dir);
    Trace trace;
    try {
        trace = run(cfg.drive, scenario, params, opts.horizon);
    } catch (const SimulationDiverged& e) {
        write_trace_csv(e.partial_trace(), (out / "trace.csv").string());
        std::cerr << "error: " << e.what() << " (partial trace written)\n";
        return 2;
    }
    write_trace_csv(trace, (out / "trace.csv").string());
    const Metrics m = compute_metrics(trace, scenario);
    write_metrics_json(m, (out / "metrics.json").string());

    std::printf("scenario %s: %zu samples over %.6g s\n", scenario.name.c_str(),
                trace.rows.size(), trace.duration);
    std::printf("  iae %.6g  itae %.6g  rise %.4g s  overshoot %.3g%%\n", m.iae, m.itae,
                m.rise_time, m.overshoot_pct);
    std::printf("  ss error %.4g rad/s  speed ripple %.4g  torque ripple %.4g\n",
                m.steady_state_error, m.speed_ripple, m.torque_ripple);
    std::printf("  mean switching %.4g Hz  illegal transitions %ld\n",
                m.mean_switching_frequency, trace.illegal_transitions);
    return 0;
}

int cmd_tune(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);

    const StabilityReport stability = check_stability(cfg.swarm);
    if (!stability.ok) {
        std::cerr << "error: swarm configuration fails the convergence conditions:\n";
        for (const std::string& v : stability.violations)
            std::cerr << "  - " << v << "\n";
        return 1;
    }

    FitnessSpec spec;
    spec.scenario = cfg.scenario.empty() ? default_tuning_scenario()
                                         : resolve_scenario(cfg.scenario);
    spec.horizon = cfg.horizon;
    spec.drive = cfg.drive;

    const Objective objective = [&spec](const std::vector<double>& x) {
        std::array<double, 9> flat;
        std::copy_n(x.begin(), 9, flat.begin());
        return fitness(FuzzyParams::from_flat(flat), spec);
    };

    std::printf("tuning on %s (horizon %.3g s, dt %.3g s): %d particles, up to %d generations\n",
                spec.scenario.name.c_str(), spec.horizon, spec.drive.rates.dt, cfg.swarm.n_pop,
                cfg.swarm.n_max);
    const OptimizeResult result = optimize(objective, cfg.swarm);

    const auto out = prepare_out_dir(opts.out_dir);
    write_history_csv(result.history, (out / "history.csv").string());
    std::array<double, 9> flat;
    std::copy_n(result.best_position.begin(), 9, flat.begin());
    write_params_file(FuzzyParams::from_flat(flat), (out / "best.params").string());

    std::printf("finished after %zu generations (%s), best fitness %.9g\n",
                result.history.size(), result.stalled ? "stalled" : "generation limit",
                result.best_fitness);
    return 0;
}

int cmd_compare(const CommonOpts& opts, const std::string& params_a,
                const std::string& params_b) {
    const RunConfig cfg = load_config(opts);
    const Scenario scenario = resolve_scenario(cfg.scenario);
    const FuzzyParams a = load_params_file(params_a);
    const FuzzyParams b = load_params_file(params_b);

    const auto evaluate = [&](const FuzzyParams& p) {
        const Trace trace = run(cfg.drive, scenario, p, opts.horizon);
        return compute_metrics(trace, scenario);
    };
    const Metrics ma = evaluate(a);
    const Metrics mb = evaluate(b);

    nlohmann::ordered_json report;
    report["scenario"] = scenario.name;
    report["a"] = {{"params", params_a}, {"metrics", metrics_json(ma)}};
    report["b"] = {{"params", params_b}, {"metrics", metrics_json(mb)}};
    report["fitness_a"] = ma.iae + ma.itae;
    report["fitness_b"] = mb.iae + mb.itae;

    const auto out = prepare_out_dir(opts.out_dir);
    std::ofstream file((out / "report.json").string(), std::ios::binary);
    file << report.dump(2) << "\n";

    std::printf("scenario %s\n", scenario.name.c_str());
    std::printf("  %-26s %14s %14s\n", "metric", "A", "B");
    const auto row = [](const char* name, double va, double vb) {
        std::printf("  %-26s %14.6g %14.6g\n", name, va, vb);
    };
    row("iae", ma.iae, mb.iae);
    row("itae", ma.itae, mb.itae);
    row("iae+itae", ma.iae + ma.itae, mb.iae + mb.itae);
    row("rise_time", ma.rise_time, mb.rise_time);
    row("overshoot_pct", ma.overshoot_pct, mb.overshoot_pct);
    row("steady_state_error", ma.steady_state_error, mb.steady_state_error);
    row("speed_ripple", ma.speed_ripple, mb.speed_ripple);
    row("torque_ripple", ma.torque_ripple, mb.torque_ripple);
    row("mean_switching_frequency", ma.mean_switching_frequency, mb.mean_switching_frequency);
    return 0;
}

int cmd_check_stability(const CommonOpts& opts) {
    const RunConfig cfg = load_config(opts);
    const StabilityReport report = check_stability(cfg.swarm);
    std::printf("c1 = %g, c2 = %g, w in [%g, %g]\n", cfg.swarm.c1, cfg.swarm.c2, cfg.swarm.w_min,
                cfg.swarm.w_max);
    if (report.ok) {
        std::printf("stable: 0 < c1+c2 < 4 and (c1+c2)/2 - 1 < w < 1 hold over the schedule\n");
        return 0;
    }
    std::printf("unstable:\n");
    for (const std::string& v : report.violations)
        std::printf("  - %s\n", v.c_str());
    return 1;
}

int cmd_list_scenarios() {
    for (const Scenario& s : builtin_scenarios())
        std::printf("%-24s %4.3g s  %s\n", s.name.c_str(), s.duration, s.description.c_str());
    const Scenario tuning = default_tuning_scenario();
    std::printf("%-24s %4.3g s  %s\n", tuning.name.c_str(), tuning.duration,
                tuning.description.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"induction motor drive simulation and fuzzy speed controller tuning"};
    app.require_subcommand(1);

    CommonOpts sim_opts, tune_opts, cmp_opts, stab_opts;
    std::string params_a, params_b;

    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario, write trace + metrics");
    add_common(simulate, sim_opts);
    simulate->add_option("--params", sim_opts.params_path, "fuzzy parameter file");

    CLI::App* tune = app.add_subcommand("tune", "optimize the fuzzy controller parameters");
    add_common(tune, tune_opts);

    CLI::App* compare = app.add_subcommand("compare", "run two parameter sets on one scenario");
    add_common(compare, cmp_opts);
    compare->add_option("--params-a", params_a, "first parameter file")->required();
    compare->add_option("--params-b", params_b, "second parameter file")->required();

    CLI::App* stability = app.add_subcommand("check-stability", "verify swarm convergence conditions");
    add_common(stability, stab_opts, /*with_scenario=*/false);

    app.add_subcommand("list-scenarios", "list available scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(sim_opts);
        if (tune->parsed())
            return cmd_tune(tune_opts);
        if (compare->parsed())
            return cmd_compare(cmp_opts, params_a, params_b);
        if (stability->parsed())
            return cmd_check_stability(stab_opts);
        return cmd_list_scenarios();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
