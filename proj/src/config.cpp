#include "imdrive/config.hpp"

#include "imdrive/errors.hpp"
#include "imdrive/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace imdrive {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& s) {
    const std::size_t pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
}

double parse_number(const std::string& value, int line) {
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + value + "'");
    }
    if (consumed != value.size())
        throw ConfigError(line, "trailing characters after number in '" + value + "'");
    return v;
}

int parse_int(const std::string& value, int line) {
    const double v = parse_number(value, line);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError(line, "expected an integer, got '" + value + "'");
    return i;
}

std::uint64_t parse_seed(const std::string& value, int line) {
    // stoull silently wraps negative inputs, so screen the sign ourselves
    if (value.empty() || value.front() == '-' || value.front() == '+')
        throw ConfigError(line, "expected an unsigned integer seed, got '" + value + "'");
    try {
        std::size_t consumed = 0;
        const std::uint64_t v = std::stoull(value, &consumed);
        if (consumed != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected an unsigned integer seed, got '" + value + "'");
    }
}

// Walk `key = value` lines, handing each to `apply(section, key, value, line)`.
template <typename Apply>
void scan_lines(std::istream& in, Apply&& apply) {
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(strip_comment(raw));
        if (text.empty())
            continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw ConfigError(line, "malformed section header '" + text + "'");
            section = trim(text.substr(1, text.size() - 2));
            if (section.empty())
                throw ConfigError(line, "empty section name");
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected 'key = value', got '" + text + "'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty())
            throw ConfigError(line, "missing key before '='");
        if (value.empty())
            throw ConfigError(line, "missing value for '" + key + "'");
        apply(section, key, value, line);
    }
}

bool apply_fuzzy_key(FuzzyParams& p, const std::string& key, double v) {
    if (key == "k1")
        p.k1 = v;
    else if (key == "k2")
        p.k2 = v;
    else if (key == "k3")
        p.k3 = v;
    else if (key == "a1")
        p.a1 = v;
    else if (key == "a2")
        p.a2 = v;
    else if (key == "b1")
        p.b1 = v;
    else if (key == "b2")
        p.b2 = v;
    else if (key == "c1")
        p.c1 = v;
    else if (key == "c2")
        p.c2 = v;
    else
        return false;
    return true;
}

} // namespace

RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    scan_lines(in, [&](const std::string& section, const std::string& key,
                       const std::string& value, int line) {
        const auto num = [&] { return parse_number(value, line); };
        const auto integer = [&] { return parse_int(value, line); };
        if (section == "machine") {
            MachineParams& m = cfg.drive.machine;
            if (key == "r_s")
                m.r_s = num();
            else if (key == "r_r")
                m.r_r = num();
            else if (key == "l_ls")
                m.l_ls = num();
            else if (key == "l_lr")
                m.l_lr = num();
            else if (key == "l_m")
                m.l_m = num();
            else if (key == "pole_pairs")
                m.pole_pairs = integer();
            else if (key == "inertia")
                m.inertia = num();
            else if (key == "friction")
                m.friction = num();
            else
                throw ConfigError(line, "unknown key '" + key + "' in [machine]");
        } else if (section == "inverter") {
            if (key == "v_dc")
                cfg.drive.inverter.v_dc = num();
            else
                throw ConfigError(line, "unknown key '" + key + "' in [inverter]");
        } else if (section == "hysteresis") {
            if (key == "band")
                cfg.drive.hysteresis.band = num();
            else if (key == "dead_zone")
                cfg.drive.hysteresis.dead_zone = num();
            else
                throw ConfigError(line, "unknown key '" + key + "' in [hysteresis]");
        } else if (section == "foc") {
            if (key == "lambda_r_ref")
                cfg.drive.lambda_r_ref = num();
            else
                throw ConfigError(line, "unknown key '" + key + "' in [foc]");
        } else if (section == "fuzzy") {
            if (!apply_fuzzy_key(cfg.fuzzy, key, num()))
                throw ConfigError(line, "unknown key '" + key + "' in [fuzzy]");
        } else if (section == "pso") {
            SwarmConfig& s = cfg.swarm;
            if (key == "n_max")
                s.n_max = integer();
            else if (key == "n_pop")
                s.n_pop = integer();
            else if (key == "c1")
                s.c1 = num();
            else if (key == "c2")
                s.c2 = num();
            else if (key == "w_max")
                s.w_max = num();
            else if (key == "w_min")
                s.w_min = num();
            else if (key == "stall_generations")
                s.stall_generations = integer();
            else if (key == "function_tolerance")
                s.function_tolerance = num();
            else if (key == "seed")
                s.seed = parse_seed(value, line);
            else if (key == "threads")
                s.threads = integer();
            else
                throw ConfigError(line, "unknown key '" + key + "' in [pso]");
        } else if (section == "sim") {
            LoopRates& r = cfg.drive.rates;
            if (key == "dt")
                r.dt = num();
            else if (key == "speed_loop_period")
                r.speed_loop_period = num();
            else if (key == "current_loop_period")
                r.current_loop_period = num();
            else if (key == "trace_period")
                r.trace_period = num();
            else if (key == "torque_limit")
                cfg.drive.torque_limit = num();
            else if (key == "scenario")
                cfg.scenario = value;
            else if (key == "horizon")
                cfg.horizon = num();
            else
                throw ConfigError(line, "unknown key '" + key + "' in [sim]");
        } else if (section.empty()) {
            throw ConfigError(line, "key '" + key + "' outside any section");
        } else {
            throw ConfigError(line, "unknown section [" + section + "]");
        }
    });

    try {
        cfg.drive.validate();
        cfg.fuzzy.validate();
        cfg.swarm.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.horizon > 0.0))
        throw ConfigError("sim: horizon must be > 0");
    if (!cfg.scenario.empty() && !find_scenario(cfg.scenario)) {
        std::string msg = "unknown scenario '" + cfg.scenario + "'; available:";
        for (const std::string& n : scenario_names())
            msg += " " + n;
        throw ConfigError(msg);
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_run_config(in);
}

FuzzyParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open parameter file '" + path + "'");

    FuzzyParams params;
    std::map<std::string, int> seen;
    scan_lines(in, [&](const std::string& section, const std::string& key,
                       const std::string& value, int line) {
        if (!section.empty())
            throw ConfigError(line, "parameter files have no sections");
        if (seen.count(key))
            throw ConfigError(line, "duplicate field '" + key + "'");
        if (!apply_fuzzy_key(params, key, parse_number(value, line)))
            throw ConfigError(line, "unknown field '" + key + "'");
        seen[key] = line;
    });
    for (const char* field : {"k1", "k2", "k3", "a1", "a2", "b1", "b2", "c1", "c2"})
        if (!seen.count(field))
            throw ConfigError("missing field '" + std::string(field) + "' in " + path);
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return params;
}

void write_params_file(const FuzzyParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    const std::array<double, 9> v = params.flat();
    const char* names[] = {"k1", "k2", "k3", "a1", "a2", "b1", "b2", "c1", "c2"};
    char buf[96];
    for (int i = 0; i < 9; ++i) {
        std::snprintf(buf, sizeof(buf), "%s = %.17g\n", names[i], v[i]);
        out << buf;
    }
}

} // namespace imdrive
