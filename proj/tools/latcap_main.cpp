#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>

#include "latcap/config.hpp"
#include "latcap/emit.hpp"
#include "latcap/errors.hpp"
#include "latcap/excursion_sampler.hpp"
#include "latcap/experiments.hpp"
#include "latcap/spectral.hpp"

namespace latcap {
int run_selftest();
int run_pilot(const RunConfig& cfg);
}  // namespace latcap

namespace {

using namespace latcap;

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
    ExperimentConfig ec;
    ec.seed = cfg.seed;
    ec.workers = cfg.workers;
    ec.cap_policy.exact_max = cfg.solver_cap;
    ec.teleport.step_cap = cfg.step_cap;
    ec.record_timing = cfg.record_timing;
    return ec;
}

int run_capacity(const RunConfig& cfg) {
    Workspace ws;
    const ShapeSpec shape = parse_shape(cfg.shape, cfg.dimension);
    const auto& bundle = ws.bundle(shape, cfg.N);
    std::string csv = "d,shape,N,method,cap,residual_or_se,seed\n";
    csv += std::to_string(cfg.dimension) + "," + csv_escape(shape.str()) + "," +
           std::to_string(cfg.N) + ",exact," + format_double(bundle.cap) + "," +
           format_double(bundle.profile->residual) + "," + std::to_string(cfg.seed) + "\n";
    if (cfg.kind == "mc") {
        CapacityMcConfig mc;
        mc.replicas = cfg.replicas;
        McEstimate est = capacity_mc(*bundle.domain, ws.green(cfg.dimension), mc, cfg.seed);
        csv += std::to_string(cfg.dimension) + "," + csv_escape(shape.str()) + "," +
               std::to_string(cfg.N) + ",mc," + format_double(est.mean) + "," +
               format_double(est.se) + "," + std::to_string(cfg.seed) + "\n";
    }
    atomic_write_file(out_path(cfg, "capacity.csv"), csv);
    atomic_write_file(out_path(cfg, "profile.csv"), profile_csv(*bundle.profile));
    std::printf("cap = %.12g (residual %.3g), wrote %s\n", bundle.cap, bundle.profile->residual,
                out_path(cfg, "capacity.csv").c_str());
    return 0;
}

int run_eigen(const RunConfig& cfg) {
    const ShapeSpec shape = parse_shape(cfg.shape, cfg.dimension);
    DomainPtr dom = make_domain(blow_up(shape, cfg.N));
    EigenPair pair = principal_eigenpair(dom);
    std::string csv = "d,shape,N,lambda,lambda2,residual,seed\n";
    double l2 = 0;
    std::string l2s = "";
    if (cfg.second_eigenvalue) {
        l2 = second_eigenvalue(pair);
        l2s = format_double(l2);
    }
    csv += std::to_string(cfg.dimension) + "," + csv_escape(shape.str()) + "," +
           std::to_string(cfg.N) + "," + format_double(pair.lambda) + "," + l2s + "," +
           format_double(pair.residual) + "," + std::to_string(cfg.seed) + "\n";
    atomic_write_file(out_path(cfg, "eigen.csv"), csv);
    atomic_write_file(out_path(cfg, "phi.csv"), eigen_csv(pair));
    std::printf("lambda = %.12f", pair.lambda);
    if (cfg.second_eigenvalue) std::printf(", lambda2 = %.12f", l2);
    std::printf(" (residual %.3g)\n", pair.residual);
    return 0;
}

int run_interlace(const RunConfig& cfg) {
    Workspace ws;
    const ShapeSpec shape = parse_shape(cfg.shape, cfg.dimension);
    const auto& bundle = ws.bundle(shape, cfg.N);
    const GreenTable& table = ws.green(cfg.dimension);
    InterlaceConfig icfg;
    icfg.teleport.step_cap = cfg.step_cap;

    std::string csv = "sample,trajectory_count,trace_size,density,seed\n";
    double dens_sum = 0, dens_sq = 0;
    InterlacementSample last;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
        RngStream rng = make_stream(cfg.seed, StreamTag::interlace, 0, s);
        last = sample_interlacement(cfg.u, bundle.domain, *bundle.profile, *bundle.entry, table,
                                    icfg, rng);
        const double density = double(last.trace.size()) / double(bundle.domain->size());
        dens_sum += density;
        dens_sq += density * density;
        csv += std::to_string(s) + "," + std::to_string(last.trajectory_count) + "," +
               std::to_string(last.trace.size()) + "," + format_double(density) + "," +
               std::to_string(cfg.seed) + "\n";
    }
    atomic_write_file(out_path(cfg, "interlace.csv"), csv);
    // last sample's coordinates with a provenance header
    std::string trace = "# u=" + format_double(cfg.u) + " seed=" + std::to_string(cfg.seed) +
                        " window=" + shape.str() + " N=" + std::to_string(cfg.N) +
                        " trajectory_count=" + std::to_string(last.trajectory_count) + "\n";
    trace += points_csv(last.trace, cfg.dimension);
    atomic_write_file(out_path(cfg, "trace.csv"), trace);
    const double n = double(cfg.samples);
    const double mean = dens_sum / n;
    const double se = n > 1 ? std::sqrt((dens_sq / n - mean * mean) / (n - 1)) : 0.0;
    std::printf("density mean = %.6f (se %.6f), theta(u) = %.6f\n", mean, se,
                1.0 - std::exp(-cfg.u / table.g0()));
    return 0;
}

int run_confine(const RunConfig& cfg) {
    Workspace ws;
    const ShapeSpec shape = ShapeSpec::ball_shape(cfg.dimension);
    const auto& bundle = ws.bundle(shape, cfg.N);
    std::int64_t t = cfg.t;
    if (t < 0) throw ConfigError("confine: set --t");
    ConfinedSampler sampler = ConfinedSampler::build(bundle.domain, std::uint64_t(t));
    auto batch = sampler.sample(Point{}, cfg.replicas, cfg.seed, 0, cfg.export_paths);
    const Rational eps = Rational::parse(cfg.eps);
    const Rational delta = Rational::parse(cfg.delta);

    std::string csv = "replica,trace_size,volume_ratio,excursions,seed\n";
    for (int r = 0; r < cfg.replicas; ++r) {
        std::string exc = "";
        if (cfg.export_paths) {
            ExcursionStats st = excursion_stats(batch.paths[std::size_t(r)], *bundle.domain, eps,
                                                delta);
            exc = std::to_string(st.count);
        }
        csv += std::to_string(r) + "," + std::to_string(batch.traces[std::size_t(r)].size()) +
               "," +
               format_double(double(batch.traces[std::size_t(r)].size()) /
                             double(bundle.domain->size())) +
               "," + exc + "," + std::to_string(cfg.seed) + "\n";
    }
    atomic_write_file(out_path(cfg, "confine.csv"), csv);
    if (cfg.export_paths) {
        std::string pcsv = "replica,step,coords...\n";
        for (int r = 0; r < cfg.replicas; ++r) {
            const auto& path = batch.paths[std::size_t(r)];
            for (std::size_t s = 0; s < path.size(); ++s) {
                pcsv += std::to_string(r) + "," + std::to_string(s);
                for (int i = 0; i < cfg.dimension; ++i)
                    pcsv += "," + std::to_string(path[s][i]);
                pcsv += "\n";
            }
        }
        atomic_write_file(out_path(cfg, "paths.csv"), pcsv);
    }
    std::printf("confined %d walks of t=%lld in B_%lld, q_t(0) = %.6g\n", cfg.replicas,
                static_cast<long long>(t), static_cast<long long>(cfg.N),
                sampler.q_t(Point{}));
    return 0;
}

RatioKind parse_kind(const std::string& k) {
    if (k == "RI") return RatioKind::RI;
    if (k == "RI_reduced") return RatioKind::RI_reduced;
    if (k == "RW") return RatioKind::RW;
    if (k == "Bernoulli") return RatioKind::Bernoulli;
    if (k == "Volume") return RatioKind::Volume;
    throw ConfigError("unknown sweep kind: " + k);
}

int run_sweep(const RunConfig& cfg) {
    Workspace ws;
    const ShapeSpec shape = parse_shape(cfg.shape, cfg.dimension);
    if (cfg.N_grid.empty() || cfg.regime_grid.empty())
        throw ConfigError("sweep: set --N-grid and --regime-grid");
    SweepRecord rec = sweep_phase_transition(ws, parse_kind(cfg.kind), cfg.dimension, shape,
                                             cfg.N_grid, cfg.regime_grid, cfg.replicas,
                                             experiment_config(cfg));
    atomic_write_file(out_path(cfg, "sweep.csv"), sweep_csv(rec));
    atomic_write_file(out_path(cfg, "sweep.json"), sweep_json(rec));
    if (cfg.svg) atomic_write_file(out_path(cfg, "sweep.svg"), sweep_svg(rec));
    for (const auto& pt : rec.points)
        std::printf("N=%lld regime=%.4g mean=%.4f se=%.4f\n", static_cast<long long>(pt.N),
                    pt.est.regime_parameter, pt.est.mean, pt.est.se);
    return 0;
}

int run_lln(const RunConfig& cfg) {
    Workspace ws;
    if (cfg.n_grid.empty()) throw ConfigError("lln: set --n-grid");
    CapacityLlnResult res =
        lln_capacity(ws, cfg.dimension, cfg.n_grid, cfg.replicas, experiment_config(cfg));
    atomic_write_file(out_path(cfg, "lln.csv"), lln_csv(res, cfg.seed));
    atomic_write_file(out_path(cfg, "lln.json"), lln_json(res, cfg.seed));
    for (const auto& pt : res.points)
        std::printf("n=%llu normalized mean=%.6f se=%.6f\n",
                    static_cast<unsigned long long>(pt.n), pt.mean, pt.se);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latcap: discrete potential theory and random interlacements on Z^d"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");

    // the config file is parsed first so that flags win
    app.preparse_callback([&](std::size_t) {
        if (!config_path.empty()) cfg = latcap::RunConfig::from_json_file(config_path);
    });

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "master seed (fixed default, never wall clock)");
        sub->add_option("--workers", cfg.workers, "worker threads");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--replicas", cfg.replicas, "replica count");
        sub->add_option("--budget-mem-mb", cfg.budget_mem_mb, "memory budget (MB)");
        sub->add_option("--step-cap", cfg.step_cap, "per-walk step cap");
        sub->add_option("--solver-cap", cfg.solver_cap, "dense capacity solver cap");
        sub->add_option("--d", cfg.dimension, "lattice dimension (3..8)");
        sub->add_flag("--timing", cfg.record_timing, "record wall times in CSVs");
    };

    CLI::App* c_cap = app.add_subcommand("capacity", "equilibrium measure and capacity");
    add_common(c_cap);
    c_cap->add_option("--N", cfg.N, "blow-up scale");
    c_cap->add_option("--shape", cfg.shape, "ball | box | annulus(i,o)");
    c_cap->add_option("--method", cfg.kind, "exact (default) or mc")->default_str("exact");

    CLI::App* c_eig = app.add_subcommand("eigen", "principal eigenpair of the killed kernel");
    add_common(c_eig);
    c_eig->add_option("--N", cfg.N, "blow-up scale");
    c_eig->add_option("--shape", cfg.shape, "domain shape");
    c_eig->add_flag("--second", cfg.second_eigenvalue, "also compute lambda2");

    CLI::App* c_int = app.add_subcommand("interlace", "interlacement window samples");
    add_common(c_int);
    c_int->add_option("--N", cfg.N, "window scale");
    c_int->add_option("--shape", cfg.shape, "window shape");
    c_int->add_option("--u", cfg.u, "intensity");
    c_int->add_option("--samples", cfg.samples, "sample count");

    CLI::App* c_conf = app.add_subcommand("confine", "confined-walk samples on the ball");
    add_common(c_conf);
    c_conf->add_option("--N", cfg.N, "ball radius");
    c_conf->add_option("--t", cfg.t, "horizon (steps)");
    c_conf->add_option("--eps", cfg.eps, "excursion eps (rational)");
    c_conf->add_option("--delta", cfg.delta, "excursion delta (rational)");
    c_conf->add_flag("--export-paths", cfg.export_paths, "write full paths (large)");

    CLI::App* c_sweep = app.add_subcommand("sweep", "phase-transition sweep");
    add_common(c_sweep);
    c_sweep->add_option("--kind", cfg.kind, "RI | RI_reduced | RW | Bernoulli | Volume");
    c_sweep->add_option("--shape", cfg.shape, "domain shape");
    c_sweep->add_option("--N-grid", cfg.N_grid, "scales")->delimiter(',');
    c_sweep->add_option("--regime-grid", cfg.regime_grid, "regime parameters")->delimiter(',');
    c_sweep->add_flag("--svg", cfg.svg, "emit sweep.svg");

    CLI::App* c_lln = app.add_subcommand("lln", "capacity law of large numbers");
    add_common(c_lln);
    c_lln->add_option("--n-grid", cfg.n_grid, "walk lengths")->delimiter(',');

    CLI::App* c_self = app.add_subcommand("selftest", "run the built-in example suite");
    add_common(c_self);

    CLI::App* c_pilot = app.add_subcommand("pilot", "fit calibration constants");
    add_common(c_pilot);
    c_pilot->add_option("--which", cfg.pilot_which, "gap | ri-endpoints | tilt | hit-trace | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_cap->parsed()) cfg.command = "capacity";
        if (c_eig->parsed()) cfg.command = "eigen";
        if (c_int->parsed()) cfg.command = "interlace";
        if (c_conf->parsed()) cfg.command = "confine";
        if (c_sweep->parsed()) cfg.command = "sweep";
        if (c_lln->parsed()) cfg.command = "lln";
        if (c_self->parsed()) cfg.command = "selftest";
        if (c_pilot->parsed()) cfg.command = "pilot";
        cfg.validate();

        if (cfg.command == "capacity") return run_capacity(cfg);
        if (cfg.command == "eigen") return run_eigen(cfg);
        if (cfg.command == "interlace") return run_interlace(cfg);
        if (cfg.command == "confine") return run_confine(cfg);
        if (cfg.command == "sweep") return run_sweep(cfg);
        if (cfg.command == "lln") return run_lln(cfg);
        if (cfg.command == "selftest") return latcap::run_selftest();
        if (cfg.command == "pilot") return latcap::run_pilot(cfg);
        throw ConfigError("unknown command");
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
