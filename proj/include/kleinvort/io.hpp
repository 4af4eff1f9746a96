// Experiment configuration (JSON) and the CSV/JSON serializers used by the
// command-line front end.  All floating-point CSV fields are written with 17
// significant digits so downstream diffs are bit-stable; JSON uses the
// library's shortest-round-trip formatting.  serialize(parse(text)) is
// idempotent: keys are emitted in a fixed order.

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "integrator.hpp"
#include "reduction.hpp"
#include "selftest.hpp"
#include "state.hpp"

namespace kleinvort {

using ordered_json = nlohmann::ordered_json;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double s_min = -kPi;
    double s_max = kPi;
    double y_min = -kPi;
    double y_max = kPi;
    std::size_t resolution = 512;
};

struct ScanSpec {
    double y1;
    double y2;
    double gamma2 = 1.0;
    int n_points = 1024;
};

struct ExperimentConfig {
    std::string mode = "klein"; // klein | torus-cover | cylinder-cover
    std::vector<Vortex> vortices;
    IntegratorOptions integrator;
    double t_end = 10.0;
    GridSpec grid;
    std::optional<ReducedParams> reduced;
    std::vector<ScanSpec> scans;
    std::string output_dir = ".";
    std::uint64_t seed = 1;

    CoverMode cover_mode() const {
        return mode == "torus-cover" ? CoverMode::torus : CoverMode::cylinder;
    }
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else
            ++col;
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key)) throw config_error(ctx + ": missing required field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(ctx + ": field '" + key + "': " + e.what());
    }
}

template <typename T>
void maybe(const nlohmann::json& j, const std::string& key, T& out, const std::string& ctx) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(ctx + ": field '" + key + "': " + e.what());
    }
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config: JSON parse error at " + detail::line_col(text, e.byte) + ": " +
                           e.what());
    }
    if (!j.is_object()) throw config_error("config: top level must be a single object");

    ExperimentConfig cfg;
    detail::maybe(j, "mode", cfg.mode, "config");
    if (cfg.mode != "klein" && cfg.mode != "torus-cover" && cfg.mode != "cylinder-cover")
        throw config_error("config: mode must be klein, torus-cover or cylinder-cover, got '" +
                           cfg.mode + "'");
    if (j.contains("vortices")) {
        if (!j["vortices"].is_array()) throw config_error("config: vortices must be an array");
        std::size_t idx = 0;
        for (const auto& v : j["vortices"]) {
            const std::string ctx = "config: vortices[" + std::to_string(idx) + "]";
            Vortex vx{detail::require<double>(v, "x", ctx), detail::require<double>(v, "y", ctx),
                      detail::require<double>(v, "gamma", ctx)};
            if (vx.gamma == 0.0) throw config_error(ctx + ": gamma must be nonzero");
            cfg.vortices.push_back(vx);
            ++idx;
        }
        // load-time collision check (direct and mu-image), naming the pair
        try {
            KleinState probe(cfg.vortices);
        } catch (const collision_error& e) {
            throw config_error(std::string("config: vortices ") + std::to_string(e.first) +
                               " and " + std::to_string(e.second) +
                               (e.image ? " collide through a mu-image" : " collide") +
                               " (twisted separation " + std::to_string(e.distance) + ")");
        }
    }
    if (j.contains("integrator")) {
        const auto& ji = j["integrator"];
        detail::maybe(ji, "t_end", cfg.t_end, "config: integrator");
        detail::maybe(ji, "rtol", cfg.integrator.rtol, "config: integrator");
        detail::maybe(ji, "atol", cfg.integrator.atol, "config: integrator");
        detail::maybe(ji, "max_step", cfg.integrator.max_step, "config: integrator");
        detail::maybe(ji, "initial_step", cfg.integrator.initial_step, "config: integrator");
        detail::maybe(ji, "sample_interval", cfg.integrator.sample_interval, "config: integrator");
        detail::maybe(ji, "collision_stop", cfg.integrator.collision_stop, "config: integrator");
        try {
            cfg.integrator.validate();
            if (!(cfg.t_end > 0)) throw std::invalid_argument("t_end must be positive");
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("config: integrator: ") + e.what());
        }
    }
    if (j.contains("grid")) {
        const auto& jg = j["grid"];
        detail::maybe(jg, "s_min", cfg.grid.s_min, "config: grid");
        detail::maybe(jg, "s_max", cfg.grid.s_max, "config: grid");
        detail::maybe(jg, "y_min", cfg.grid.y_min, "config: grid");
        detail::maybe(jg, "y_max", cfg.grid.y_max, "config: grid");
        detail::maybe(jg, "resolution", cfg.grid.resolution, "config: grid");
    }
    if (j.contains("reduced")) {
        const auto& jr = j["reduced"];
        const std::string ctx = "config: reduced";
        try {
            cfg.reduced.emplace(detail::require<double>(jr, "gamma1", ctx),
                                detail::require<double>(jr, "gamma2", ctx),
                                detail::require<double>(jr, "c", ctx));
        } catch (const degenerate_error& e) {
            throw config_error(ctx + ": " + e.what());
        }
    }
    if (j.contains("scans")) {
        if (!j["scans"].is_array()) throw config_error("config: scans must be an array");
        std::size_t idx = 0;
        for (const auto& sc : j["scans"]) {
            const std::string ctx = "config: scans[" + std::to_string(idx) + "]";
            ScanSpec spec{detail::require<double>(sc, "y1", ctx),
                          detail::require<double>(sc, "y2", ctx)};
            detail::maybe(sc, "gamma2", spec.gamma2, ctx);
            detail::maybe(sc, "n_points", spec.n_points, ctx);
            if (spec.y1 == spec.y2) throw config_error(ctx + ": requires y1 != y2");
            cfg.scans.push_back(spec);
            ++idx;
        }
    }
    detail::maybe(j, "output_dir", cfg.output_dir, "config");
    detail::maybe(j, "seed", cfg.seed, "config");
    return cfg;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
    ordered_json j;
    j["mode"] = cfg.mode;
    j["vortices"] = ordered_json::array();
    for (const auto& v : cfg.vortices)
        j["vortices"].push_back(ordered_json{{"x", v.x}, {"y", v.y}, {"gamma", v.gamma}});
    j["integrator"] = ordered_json{{"t_end", cfg.t_end},
                                   {"rtol", cfg.integrator.rtol},
                                   {"atol", cfg.integrator.atol},
                                   {"max_step", cfg.integrator.max_step},
                                   {"initial_step", cfg.integrator.initial_step},
                                   {"sample_interval", cfg.integrator.sample_interval},
                                   {"collision_stop", cfg.integrator.collision_stop}};
    j["grid"] = ordered_json{{"s_min", cfg.grid.s_min},
                             {"s_max", cfg.grid.s_max},
                             {"y_min", cfg.grid.y_min},
                             {"y_max", cfg.grid.y_max},
                             {"resolution", cfg.grid.resolution}};
    if (cfg.reduced)
        j["reduced"] = ordered_json{
            {"gamma1", cfg.reduced->gamma1}, {"gamma2", cfg.reduced->gamma2}, {"c", cfg.reduced->c}};
    if (!cfg.scans.empty()) {
        j["scans"] = ordered_json::array();
        for (const auto& sc : cfg.scans)
            j["scans"].push_back(ordered_json{
                {"y1", sc.y1}, {"y2", sc.y2}, {"gamma2", sc.gamma2}, {"n_points", sc.n_points}});
    }
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV.

/// 17-significant-digit scientific notation (exact double round trip).
inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string simulate_csv_header(std::size_t n_vortices) {
    std::string h = "t";
    for (std::size_t k = 1; k <= n_vortices; ++k) {
        const std::string i = std::to_string(k);
        h += ",x_lift_" + i + ",y_lift_" + i + ",x_klein_" + i + ",y_klein_" + i +
             ",gamma_current_" + i;
    }
    return h + ",H,C,step_size";
}

inline std::string simulate_csv(const Trajectory& traj) {
    std::ostringstream out;
    const std::size_t nv = traj.samples.empty() ? 0 : traj.samples.front().lift.size();
    out << simulate_csv_header(nv) << "\n";
    for (const auto& s : traj.samples) {
        out << csv_number(s.t);
        for (std::size_t k = 0; k < nv; ++k)
            out << ',' << csv_number(s.lift[k].x) << ',' << csv_number(s.lift[k].y) << ','
                << csv_number(s.projected[k].x) << ',' << csv_number(s.projected[k].y) << ','
                << csv_number(s.projected[k].gamma);
        out << ',' << csv_number(s.energy) << ',' << csv_number(s.momentum_c) << ','
            << csv_number(s.step_size) << "\n";
    }
    return out.str();
}

inline ordered_json simulate_summary(const Trajectory& traj, const ExperimentConfig& cfg) {
    ordered_json j;
    j["mode"] = cfg.mode;
    j["t_end"] = cfg.t_end;
    j["samples"] = traj.samples.size();
    const double h0 = traj.samples.front().energy;
    const double c0 = traj.samples.front().momentum_c;
    j["initial"] = ordered_json{{"H", h0}, {"C", c0}};
    double e_drift = 0.0, c_drift = 0.0;
    for (const auto& s : traj.samples) {
        e_drift = std::max(e_drift, std::abs(s.energy - h0) / (1.0 + std::abs(h0)));
        c_drift = std::max(c_drift, std::abs(s.momentum_c - c0));
    }
    j["max_energy_drift"] = e_drift;
    j["max_momentum_drift"] = c_drift;
    if (traj.collision)
        j["collision"] = ordered_json{{"t", traj.collision->t},
                                      {"first", traj.collision->first},
                                      {"second", traj.collision->second},
                                      {"family", traj.collision->image ? "mu-image" : "direct"},
                                      {"distance", traj.collision->distance}};
    else
        j["collision"] = nullptr;
    j["c_jumps"] = ordered_json::array();
    for (const auto& e : traj.c_jumps)
        j["c_jumps"].push_back(ordered_json{{"t", e.t}, {"vortex", e.vortex}, {"delta_c", e.delta_c}});
    j["translational_component"] = ordered_json::array();
    if (traj.samples.size() >= 2)
        for (std::size_t k = 0; k < traj.samples.front().lift.size(); ++k)
            j["translational_component"].push_back(translational_component(traj.samples, k));
    return j;
}

inline std::string field_csv(const std::vector<double>& xs, const std::vector<double>& ys,
                             const ProbeField& field) {
    std::ostringstream out;
    out << "x,y,u,v,singular_flag\n";
    std::size_t idx = 0;
    for (const double y : ys)
        for (const double x : xs) {
            out << csv_number(x) << ',' << csv_number(y) << ','
                << csv_number(field.velocity[idx].real()) << ','
                << csv_number(field.velocity[idx].imag()) << ',' << int(field.singular[idx])
                << "\n";
            ++idx;
        }
    return out.str();
}

inline std::string levels_csv(const LevelSetGrid& grid) {
    std::ostringstream out;
    out << "s,y1,H,masked\n";
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.ns; ++i)
            out << csv_number(grid.s_coords[i]) << ',' << csv_number(grid.y_coords[j]) << ','
                << csv_number(grid.at(j, i)) << ',' << int(grid.is_masked(j, i)) << "\n";
    return out.str();
}

inline std::string robin_csv(int n_points) {
    std::ostringstream out;
    out << "y,R,dR\n";
    for (int i = 0; i < n_points; ++i) {
        const double y = -kPi / 2 + kPi * i / (n_points - 1);
        out << csv_number(y) << ',' << csv_number(robin_klein(y)) << ','
            << csv_number(robin_klein_deriv(y)) << "\n";
    }
    return out.str();
}

inline std::string scans_csv(const std::vector<Y1Scan>& scans) {
    std::ostringstream out;
    out << "scan,s,Y1,flagged\n";
    for (std::size_t i = 0; i < scans.size(); ++i)
        for (std::size_t p = 0; p < scans[i].s.size(); ++p)
            out << i << ',' << csv_number(scans[i].s[p]) << ',' << csv_number(scans[i].value[p])
                << ',' << int(scans[i].flagged[p]) << "\n";
    return out.str();
}

inline ordered_json points_json(const SingularFamilies& fams,
                                const std::vector<CriticalPoint>& crits) {
    ordered_json j;
    j["singular_points"] = ordered_json::array();
    auto push_sp = [&](const SingularPoint& sp) {
        j["singular_points"].push_back(ordered_json{{"s", sp.pt.s},
                                                    {"y1", sp.pt.y1},
                                                    {"k", sp.k},
                                                    {"family", sp.image ? "mu-image" : "direct"}});
    };
    for (const auto& sp : fams.on_zero) push_sp(sp);
    for (const auto& sp : fams.on_pi) push_sp(sp);
    j["critical_points"] = ordered_json::array();
    for (const auto& cp : crits)
        j["critical_points"].push_back(ordered_json{{"s", cp.pt.s},
                                                    {"y1", cp.pt.y1},
                                                    {"value", cp.value},
                                                    {"kind", detail::kind_name(cp.kind)},
                                                    {"grad_norm", cp.grad_norm}});
    return j;
}

inline ordered_json scan_report_json(const std::vector<ScanSpec>& specs,
                                     const std::vector<Y1Scan>& scans) {
    ordered_json j = ordered_json::array();
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const auto counts = count_extrema(scans[i]);
        ordered_json brackets = ordered_json::array();
        for (const auto& [a, b] : scans[i].brackets) brackets.push_back(ordered_json::array({a, b}));
        j.push_back(ordered_json{{"y1", specs[i].y1},
                                 {"y2", specs[i].y2},
                                 {"gamma2", specs[i].gamma2},
                                 {"n_points", specs[i].n_points},
                                 {"sign_change_brackets", brackets},
                                 {"extrema", ordered_json{{"total", counts.total},
                                                          {"near_zero", counts.near_zero},
                                                          {"near_pi", counts.near_pi}}}});
    }
    return j;
}

inline ordered_json selftest_json(const SelftestReport& rep) {
    ordered_json j;
    j["seed"] = rep.seed;
    j["all_pass"] = rep.all_pass();
    j["checks"] = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json e{{"name", c.name},
                       {"max_error", c.max_error},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}};
        if (c.measured) e["measured"] = *c.measured;
        if (c.expected) e["expected"] = *c.expected;
        j["checks"].push_back(e);
    }
    return j;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace kleinvort
