#pragma once

// Command-line front end:
//
//   fogform solve --config <path> [--set k=v ...]
//   fogform experiment <name> --config <path> --out <dir> [--seed S] [--workers N] [--set k=v ...]
//
// --config falls back to $FOGFORM_CONFIG, then to built-in defaults.
// Exit codes: 0 ok, 1 usage, 2 infeasible or unknown experiment, 3 bad config, 4 I/O.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fogform/config.hpp"
#include "fogform/errors.hpp"
#include "fogform/experiments.hpp"
#include "fogform/version.hpp"

namespace fogform::cli {

enum ExitCode : int { ok = 0, usage = 1, infeasible = 2, bad_config = 3, io_error = 4 };

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"offline-sweep", "online-vs-offline", "ratio-cdf", "distance-sweep",
                                                "choose-j"};
    return names;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::optional<std::string> resolve_config_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("FOGFORM_CONFIG"); env && *env) return std::string(env);
    return std::nullopt;
}

inline std::string fmt(double v, int digits = 9) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

/// Solves the distribution for the configured initiator and its J best neighbors.
inline int cmd_solve(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
    const RadioParams radio = cfg.radio.params();
    Rng rng(cfg.seed, 0);
    const auto cands = generate_scenario(cfg, radio, rng);
    if (cfg.J > cfg.n_candidates) {
        err << "error: J=" << cfg.J << " exceeds n_candidates=" << cfg.n_candidates << '\n';
        return bad_config;
    }
    const auto chosen = canonical_order(offline_top_j(cands, static_cast<std::size_t>(cfg.J)).chosen);
    const NodeSet nodes = make_node_set(cfg, chosen, cloud_rate(cfg, radio));

    SolveReport r;
    try {
        r = solve_distribution(nodes, cfg.eta);
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return infeasible;
    }

    out << "x_i " << fmt(cfg.x_i) << " packets/s, J " << cfg.J << ", eta " << fmt(cfg.eta) << " s\n";
    out << "path        alpha            delay_s          active\n";
    const auto alphas = r.distribution.flat(true);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        std::string name = k == 0 ? "local" : k == 1 ? "cloud" : "fog[" + std::to_string(chosen[k - 2].id) + "]";
        name.resize(12, ' ');
        std::string a = fmt(alphas[k], 12), d = fmt(r.per_path_delays[k], 12);
        a.resize(17, ' ');
        d.resize(17, ' ');
        out << name << a << d << (r.active_mask[k] ? "yes" : "no") << '\n';
    }
    out << "alpha_local " << fmt(r.distribution.alpha_local, 12) << '\n';
    out << "alpha_cloud " << fmt(r.distribution.alpha_cloud, 12) << '\n';
    out << "alpha_fog_total " << fmt(r.distribution.fog_total(), 12) << '\n';
    out << "common_delay " << fmt(r.common_delay, 12) << '\n';
    out << "max_delay " << fmt(r.max_delay, 12) << '\n';
    out << "total_cost " << fmt(r.total_cost, 12) << '\n';
    return ok;
}

struct ExperimentOutput {
    Table table;
    std::string summary;
};

inline ExperimentOutput run_experiment(const std::string& name, const ScenarioConfig& cfg, unsigned workers) {
    std::ostringstream s;
    if (name == "offline-sweep") {
        auto t = run_offline_sweep(cfg);
        s << "offline sweep: " << t.rows.size() << " rows\n";
        return {std::move(t), s.str()};
    }
    if (name == "online-vs-offline") {
        auto res = run_online_vs_offline(cfg, workers);
        for (std::size_t k = 0; k < res.table.rows.size(); ++k)
            s << "J=" << res.table.at(k, "J") << " online " << fmt(res.table.at(k, "online_cost"), 6) << " offline "
              << fmt(res.table.at(k, "offline_cost"), 6) << " gap " << fmt(100 * res.table.at(k, "cost_gap"), 3)
              << "%\n";
        return {std::move(res.table), s.str()};
    }
    if (name == "ratio-cdf") {
        auto t = run_ratio_cdf(cfg, workers);
        const std::size_t n = t.rows.size();
        std::size_t at_one = 0;
        double mean = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            mean += t.rows[k][1];
            if (t.rows[k][1] == 1.0) ++at_one;
        }
        s << "ratio: mean " << fmt(mean / double(n), 6) << ", median " << fmt(t.rows[(n - 1) / 2][1], 6) << ", min "
          << fmt(t.rows.front()[1], 6) << ", at 1: " << fmt(100.0 * double(at_one) / double(n), 4) << "%\n";
        return {std::move(t), s.str()};
    }
    if (name == "distance-sweep") {
        auto t = run_distance_sweep(cfg, workers);
        for (std::size_t k = 0; k < t.rows.size(); ++k)
            s << "d=" << t.at(k, "distance_m") << " m cloud share " << fmt(100 * t.at(k, "share_cloud"), 4) << "%\n";
        return {std::move(t), s.str()};
    }
    if (name == "choose-j") {
        auto res = choose_j(cfg, workers);
        s << "chosen J = " << res.J << '\n';
        return {std::move(res.table), s.str()};
    }
    throw DomainError("unknown experiment " + name);
}

inline int cmd_experiment(const std::string& name, const ScenarioConfig& cfg, const std::string& out_dir,
                          unsigned workers, std::ostream& out, std::ostream& err) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        err << "error: unknown experiment '" << name << "'; valid names:";
        for (const auto& n : names) err << ' ' << n;
        err << '\n';
        return infeasible;
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        err << "error: cannot create output directory '" << out_dir << "'\n";
        return io_error;
    }
    const fs::path csv_path = fs::path(out_dir) / (name + ".csv");
    const fs::path manifest_path = fs::path(out_dir) / (name + ".manifest");

    const std::string started = utc_timestamp();
    ExperimentOutput result;
    try {
        result = run_experiment(name, cfg, workers);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return bad_config;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return infeasible;
    }

    {
        std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
        if (!csv) {
            err << "error: cannot write " << csv_path.string() << '\n';
            return io_error;
        }
        write_csv(result.table, csv);
        if (!csv) {
            err << "error: write failed for " << csv_path.string() << '\n';
            return io_error;
        }
    }

    json manifest;
    manifest["manifest_version"] = 1;
    manifest["tool"] = "fogform";
    manifest["tool_version"] = kVersion;
    manifest["experiment"] = name;
    manifest["seed"] = cfg.seed;
    manifest["workers"] = workers;
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_timestamp();
    manifest["outputs"] = {csv_path.string()};
    manifest["config"] = to_json(cfg);
    std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
    if (!mf) {
        err << "error: cannot write " << manifest_path.string() << '\n';
        return io_error;
    }
    mf << manifest.dump(2) << '\n';
    if (!mf) return io_error;

    out << result.summary << "wrote " << csv_path.string() << " and " << manifest_path.string() << '\n';
    return ok;
}

/// Full command-line entry point.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Fog network formation: task distribution solver and experiment runner", "fogform"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    std::vector<std::string> sets;

    auto* solve = app.add_subcommand("solve", "Solve the task distribution for one configuration");
    solve->add_option("--config", config_path, "Config file (JSON, comments allowed); default $FOGFORM_CONFIG");
    solve->add_option("--set", sets, "Override a config key, e.g. --set x_i=12 --set cloud.mu_c=9");

    std::string name;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    auto* exp = app.add_subcommand("experiment", "Run an experiment and write <name>.csv and <name>.manifest");
    exp->add_option("name", name, "offline-sweep | online-vs-offline | ratio-cdf | distance-sweep | choose-j")
        ->required();
    exp->add_option("--config", config_path, "Config file (JSON, comments allowed); default $FOGFORM_CONFIG");
    exp->add_option("--out", out_dir, "Output directory")->required();
    exp->add_option("--seed", seed, "Override the seed");
    exp->add_option("--workers", workers, "Worker threads for Monte Carlo iterations")->check(CLI::PositiveNumber);
    exp->add_option("--set", sets, "Override a config key, e.g. --set tau=4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? ok : usage;
    }

    ScenarioConfig cfg;
    try {
        const auto path = resolve_config_path(config_path);
        if (seed) sets.push_back("seed=" + std::to_string(*seed));
        cfg = load_config(path ? &*path : nullptr, sets);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return bad_config;
    }

    if (solve->parsed()) return cmd_solve(cfg, out, err);
    return cmd_experiment(name, cfg, out_dir, workers, out, err);
}

} // namespace fogform::cli
