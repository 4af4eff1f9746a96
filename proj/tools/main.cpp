// kleinvort: point-vortex dynamics on the Klein bottle.
//
// Subcommands:
//   simulate     integrate a configuration, emit trajectory CSV + summary JSON
//   field        induced velocity field of a configuration on a chart grid
//   levels       reduced two-vortex Hamiltonian grid + singular/critical points
//   reduce-scan  Y1 zero-scans of the reduced system
//   selftest     randomized invariant suite, JSON report
//
// Exit codes: 0 success, 1 usage, 2 configuration, 3 numerical failure or
// collision.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kleinvort/io.hpp"
#include "kleinvort/kleinvort.hpp"

namespace fs = std::filesystem;
using namespace kleinvort;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

ExperimentConfig load_config(const CommonArgs& args) {
    if (!fs::exists(args.config_path))
        throw config_error("config file not found: " + args.config_path);
    ExperimentConfig cfg = parse_config(read_file(args.config_path));
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    fs::create_directories(cfg.output_dir);
    return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

int run_simulate(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    if (cfg.vortices.empty()) throw config_error("simulate: config has no vortices");
    const CoverState initial{cfg.vortices, cfg.cover_mode()};
    Trajectory traj;
    try {
        traj = integrate(initial, cfg.t_end, cfg.integrator);
    } catch (const step_underflow_error& e) {
        std::cerr << "simulate: " << e.what() << "\n";
        return 3;
    }
    write_file(out_path(cfg, "trajectory.csv"), simulate_csv(traj));
    write_file(out_path(cfg, "summary.json"), simulate_summary(traj, cfg).dump(2) + "\n");
    std::cout << "wrote " << out_path(cfg, "trajectory.csv") << " (" << traj.samples.size()
              << " samples)\n";
    if (traj.collision) {
        std::cerr << "simulate: collision at t = " << traj.collision->t << " between vortices "
                  << traj.collision->first << " and " << traj.collision->second << " ("
                  << (traj.collision->image ? "mu-image" : "direct") << " family)\n";
        return 3;
    }
    return 0;
}

int run_field(const CommonArgs& args, int copies, std::size_t resolution) {
    ExperimentConfig cfg = load_config(args);
    if (cfg.vortices.empty()) throw config_error("field: config has no vortices");
    const KleinState state(cfg.vortices);
    const std::size_t n = resolution ? resolution : cfg.grid.resolution;
    const double lo = -kPi / 2;
    const double span = (copies == 4) ? 2 * kPi : kPi;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = ys[i] = lo + span * double(i) / double(n);
    std::vector<complex> points;
    points.reserve(n * n);
    for (const double y : ys)
        for (const double x : xs) points.emplace_back(x, y);
    const ProbeField field = probe_field(state, points);
    write_file(out_path(cfg, "field.csv"), field_csv(xs, ys, field));
    std::size_t n_singular = 0;
    for (auto f : field.singular) n_singular += f;
    ordered_json meta{{"copies", copies},
                      {"resolution", n},
                      {"singular_sentinel", "nan"},
                      {"singular_points", n_singular}};
    write_file(out_path(cfg, "field_meta.json"), meta.dump(2) + "\n");
    std::cout << "wrote " << out_path(cfg, "field.csv") << "\n";
    return 0;
}

int run_levels(const CommonArgs& args, std::size_t resolution) {
    ExperimentConfig cfg = load_config(args);
    if (!cfg.reduced) throw config_error("levels: config has no 'reduced' parameters");
    const ReducedParams& prm = *cfg.reduced;
    const std::size_t n = resolution ? resolution : cfg.grid.resolution;
    const auto grid =
        level_set_grid(prm, cfg.grid.s_min, cfg.grid.s_max, cfg.grid.y_min, cfg.grid.y_max, n, n);
    const int k_span = int(std::ceil((std::abs(cfg.grid.y_min) + std::abs(cfg.grid.y_max) + 1.0) *
                                     (std::abs(prm.gamma1) + std::abs(prm.gamma2)) /
                                     (kPi * std::abs(prm.gamma2)))) + 2;
    const auto fams = singular_points(prm, -k_span, k_span);
    const auto crits = critical_points_on_lines(prm, cfg.grid.y_min, cfg.grid.y_max);
    write_file(out_path(cfg, "levels.csv"), levels_csv(grid));
    write_file(out_path(cfg, "points.json"), points_json(fams, crits).dump(2) + "\n");
    write_file(out_path(cfg, "robin.csv"), robin_csv(1001));
    std::cout << "wrote " << out_path(cfg, "levels.csv") << " (" << crits.size()
              << " critical points)\n";
    return 0;
}

int run_reduce_scan(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    if (cfg.scans.empty()) throw config_error("reduce-scan: config has no 'scans'");
    std::vector<Y1Scan> scans;
    for (const auto& spec : cfg.scans)
        scans.push_back(scan_Y1(spec.y1, spec.y2, spec.gamma2, spec.n_points));
    write_file(out_path(cfg, "scans.csv"), scans_csv(scans));
    write_file(out_path(cfg, "scan_report.json"), scan_report_json(cfg.scans, scans).dump(2) + "\n");
    std::cout << "wrote " << out_path(cfg, "scans.csv") << "\n";
    return 0;
}

int run_selftest(const CommonArgs& args) {
    SelftestOptions opt;
    opt.seed = args.seed_set ? args.seed : 1;
    const SelftestReport rep = run_selftest(opt);
    const std::string dir = args.out_dir.empty() ? "." : args.out_dir;
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / "selftest.json").string();
    write_file(path, selftest_json(rep).dump(2) + "\n");
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (max error " << c.max_error
                  << ", tolerance " << c.tolerance << ")\n";
    std::cout << "report: " << path << "\n";
    return rep.all_pass() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-vortex dynamics on the Klein bottle"};
    app.require_subcommand(1);

    CommonArgs args;
    int copies = 1;
    std::size_t resolution = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* copt = cmd->add_option("--config", args.config_path, "experiment config (JSON)");
        if (needs_config) copt->required();
        cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", args.seed, "random seed")->each([&](const std::string&) {
            args.seed_set = true;
        });
    };

    auto* sim = app.add_subcommand("simulate", "integrate a vortex configuration");
    add_common(sim, true);
    auto* fld = app.add_subcommand("field", "induced velocity field on a chart grid");
    add_common(fld, true);
    fld->add_option("--copies", copies, "bottle copies to tile (1 or 4)")
        ->check(CLI::IsMember({1, 4}));
    fld->add_option("--resolution", resolution, "grid points per axis");
    auto* lev = app.add_subcommand("levels", "reduced Hamiltonian level-set grid");
    add_common(lev, true);
    lev->add_option("--resolution", resolution, "grid points per axis");
    auto* scn = app.add_subcommand("reduce-scan", "Y1 zero-scans of the reduced system");
    add_common(scn, true);
    auto* slf = app.add_subcommand("selftest", "randomized invariant suite");
    add_common(slf, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (app.got_subcommand(sim)) return run_simulate(args);
        if (app.got_subcommand(fld)) return run_field(args, copies, resolution);
        if (app.got_subcommand(lev)) return run_levels(args, resolution);
        if (app.got_subcommand(scn)) return run_reduce_scan(args);
        if (app.got_subcommand(slf)) return run_selftest(args);
    } catch (const config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const collision_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 1;
}
