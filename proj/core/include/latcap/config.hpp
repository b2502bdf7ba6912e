#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latcap/shape.hpp"

namespace latcap {

// One run = one command + parameters. Values come from a JSON config file
// and/or command-line flags; flags win. No environment variables, no
// wall-clock seeding: runs are reproducible by construction.
struct RunConfig {
    std::string command = "selftest";
    int dimension = 3;
    std::string shape = "ball";
    std::int64_t N = 8;
    std::vector<std::int64_t> N_grid;
    std::vector<double> regime_grid;
    double u = 1.0;
    std::int64_t t = -1;  // confined horizon; -1 = derive from regime
    std::vector<std::uint64_t> n_grid;
    int replicas = 8;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "out";
    std::string kind = "RI";
    std::string pilot_which = "all";
    bool svg = false;
    bool second_eigenvalue = false;
    bool export_paths = false;
    bool record_timing = false;
    std::string eps = "3/20";
    std::string delta = "1/20";
    // budgets
    std::uint64_t budget_mem_mb = 3072;
    std::uint64_t step_cap = 100000000;
    std::uint64_t solver_cap = 4000;

    void validate() const;
    static RunConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

// "ball", "ball(3/4)", "box", "annulus(1/2,1)"
ShapeSpec parse_shape(const std::string& text, int dimension);

// Desk-scale N caps per dimension (memory: eigen/DP state is O(N^d)).
std::int64_t max_scale(int d);

}  // namespace latcap
