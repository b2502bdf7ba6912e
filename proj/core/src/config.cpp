#include "latcap/config.hpp"

#include <fstream>

#include <json.hpp>

#include "latcap/errors.hpp"

namespace latcap {

std::int64_t max_scale(int d) {
    switch (d) {
        case 3: return 48;
        case 4: return 24;
        case 5: return 14;
        default: return 8;
    }
}

void RunConfig::validate() const {
    static const char* commands[] = {"capacity", "eigen",    "interlace", "confine",
                                     "sweep",    "lln",      "selftest",  "pilot"};
    bool ok = false;
    for (const char* c : commands) ok = ok || command == c;
    if (!ok) throw ConfigError("unknown command: " + command);
    if (dimension < 3 || dimension > 8) throw ConfigError("dimension must be in [3,8]");
    if (replicas < 1) throw ConfigError("replicas must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (budget_mem_mb == 0 || step_cap == 0 || solver_cap == 0)
        throw ConfigError("budgets must be positive");
    if (N < 1) throw ConfigError("N must be >= 1");
    if (N > max_scale(dimension))
        throw ConfigError("N exceeds the desk-scale cap " + std::to_string(max_scale(dimension)) +
                          " for d=" + std::to_string(dimension));
    for (std::int64_t n : N_grid)
        if (n < 1 || n > max_scale(dimension))
            throw ConfigError("N grid entry outside [1," + std::to_string(max_scale(dimension)) +
                              "]");
    if (u < 0) throw ConfigError("u must be >= 0");
}

namespace {

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config field '") + key + "': " + e.what());
        }
    }
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    RunConfig c;
    read_if(j, "command", c.command);
    read_if(j, "dimension", c.dimension);
    read_if(j, "shape", c.shape);
    read_if(j, "N", c.N);
    read_if(j, "N_grid", c.N_grid);
    read_if(j, "regime_grid", c.regime_grid);
    read_if(j, "u", c.u);
    read_if(j, "t", c.t);
    read_if(j, "n_grid", c.n_grid);
    read_if(j, "replicas", c.replicas);
    read_if(j, "samples", c.samples);
    read_if(j, "seed", c.seed);
    read_if(j, "workers", c.workers);
    read_if(j, "out_dir", c.out_dir);
    read_if(j, "kind", c.kind);
    read_if(j, "pilot_which", c.pilot_which);
    read_if(j, "svg", c.svg);
    read_if(j, "second_eigenvalue", c.second_eigenvalue);
    read_if(j, "export_paths", c.export_paths);
    read_if(j, "record_timing", c.record_timing);
    read_if(j, "eps", c.eps);
    read_if(j, "delta", c.delta);
    read_if(j, "budget_mem_mb", c.budget_mem_mb);
    read_if(j, "step_cap", c.step_cap);
    read_if(j, "solver_cap", c.solver_cap);
    return c;
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["dimension"] = dimension;
    j["shape"] = shape;
    j["N"] = N;
    j["N_grid"] = N_grid;
    j["regime_grid"] = regime_grid;
    j["u"] = u;
    j["t"] = t;
    j["n_grid"] = n_grid;
    j["replicas"] = replicas;
    j["samples"] = samples;
    j["seed"] = seed;
    j["workers"] = workers;
    j["out_dir"] = out_dir;
    j["kind"] = kind;
    j["pilot_which"] = pilot_which;
    j["svg"] = svg;
    j["second_eigenvalue"] = second_eigenvalue;
    j["export_paths"] = export_paths;
    j["record_timing"] = record_timing;
    j["eps"] = eps;
    j["delta"] = delta;
    j["budget_mem_mb"] = budget_mem_mb;
    j["step_cap"] = step_cap;
    j["solver_cap"] = solver_cap;
    return j.dump(2) + "\n";
}

ShapeSpec parse_shape(const std::string& text, int dimension) {
    auto paren = text.find('(');
    std::string kind = paren == std::string::npos ? text : text.substr(0, paren);
    std::string args;
    if (paren != std::string::npos) {
        auto close = text.rfind(')');
        if (close == std::string::npos || close < paren)
            throw ConfigError("bad shape syntax: " + text);
        args = text.substr(paren + 1, close - paren - 1);
    }
    if (kind == "ball") {
        Rational r = args.empty() ? Rational(1, 1) : Rational::parse(args);
        return ShapeSpec::ball_shape(dimension, r);
    }
    if (kind == "box") return ShapeSpec::box_shape(dimension);
    if (kind == "annulus") {
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw ConfigError("annulus needs (inner,outer): " + text);
        return ShapeSpec::annulus_shape(dimension, Rational::parse(args.substr(0, comma)),
                                        Rational::parse(args.substr(comma + 1)));
    }
    throw ConfigError("unknown shape: " + text);
}

}  // namespace latcap
