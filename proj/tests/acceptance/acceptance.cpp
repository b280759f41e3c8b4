// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fogform/cli.hpp"
#include "fogform/fogform.hpp"
#include "support/instances.hpp"
#include "support/reference_secretary.hpp"

using namespace fogform;

namespace {

// Tolerances and limits, all pinned here.
constexpr double kOracleRelTol = 1e-3;
constexpr int kOracleResolution = 200;
constexpr int kOracleInstances = 100;
constexpr double kOracleSeconds = 30.0;

constexpr int kEqualInstances = 1000;
constexpr double kEqualDelayRelTol = 1e-6;
constexpr double kSimplexTol = 1e-9;
constexpr double kEqualSeconds = 10.0;

constexpr int kTraceStreams = 1000;
constexpr double kTraceSeconds = 5.0;

constexpr int kRatioIterations = 10000;
constexpr double kRatioAtOneMin = 0.05;
constexpr double kRatioMedianMin = 0.85;
constexpr double kRatioFloor = 0.4;
constexpr double kRatioSeconds = 120.0;

constexpr double kShareJ0 = 0.60, kShareJ6 = 0.32, kShareTol = 0.05;
constexpr int kExpectedJ = 4;
constexpr int kTrendIterations = 20;
constexpr double kTrendSeconds = 60.0;

constexpr double kSensitivityDrop = 0.037, kSensitivityTol = 0.015;
constexpr double kSensitivitySeconds = 10.0;

constexpr int kGapIterations = 1000;
constexpr double kGapMax = 0.10;
constexpr double kGapSeconds = 120.0;

constexpr int kDistanceIterations = 1000;
constexpr double kDistanceDropMin = 0.15;
constexpr double kDistanceSeconds = 60.0;

constexpr int kDeterminismIterations = 200;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_of(const Table& t) {
    std::ostringstream os;
    write_csv(t, os);
    return os.str();
}

Verdict within_time(Verdict v, std::chrono::steady_clock::time_point t0, double limit) {
    const double s = seconds_since(t0);
    v.detail += "; " + fmt(s, 3) + " s (limit " + fmt(limit, 3) + " s)";
    if (s >= limit) v.pass = false;
    return v;
}

// 1. solver vs exhaustive grid
Verdict oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    int agree = 0;
    double worst = 0.0;
    for (int k = 0; k < kOracleInstances; ++k) {
        const NodeSet ns = testing::random_instance(2024, std::uint64_t(k));
        const double solver = solve_distribution(ns, 0.0).max_delay;
        const auto grid = grid_oracle(ns, kOracleResolution);
        const double oracle = testing::max_delay_of(ns, grid.flat(ns.cloud.has_value()));
        const double rel = std::fabs(solver - oracle) / oracle;
        worst = std::max(worst, rel);
        if (rel <= kOracleRelTol) ++agree;
    }
    Verdict v{agree == kOracleInstances, std::to_string(agree) + "/" + std::to_string(kOracleInstances) +
                                             " within " + fmt(kOracleRelTol) + " relative, worst " + fmt(worst)};
    return within_time(v, t0, kOracleSeconds);
}

// 2. equal latency on active paths, shares on the simplex
Verdict equal_latency() {
    const auto t0 = std::chrono::steady_clock::now();
    int bad = 0;
    double worst_delay = 0.0, worst_sum = 0.0;
    for (int k = 0; k < kEqualInstances; ++k) {
        const NodeSet ns = testing::random_instance(2025, std::uint64_t(k));
        const auto r = solve_distribution(ns, 0.0);
        const auto alpha = r.distribution.flat(ns.cloud.has_value());
        const double sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
        worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
        bool ok = std::fabs(sum - 1.0) <= kSimplexTol;
        for (std::size_t p = 0; p < alpha.size(); ++p) {
            if (alpha[p] < 0.0) ok = false;
            if (alpha[p] <= 0.0) continue;
            const double rel = std::fabs(r.per_path_delays[p] - r.common_delay) / r.common_delay;
            worst_delay = std::max(worst_delay, rel);
            if (rel > kEqualDelayRelTol) ok = false;
        }
        if (!ok) ++bad;
    }
    Verdict v{bad == 0, std::to_string(kEqualInstances - bad) + "/" + std::to_string(kEqualInstances) +
                            " ok, worst delay spread " + fmt(worst_delay) + ", worst |sum-1| " + fmt(worst_sum)};
    return within_time(v, t0, kEqualSeconds);
}

std::vector<FogCandidate> stream_of(const std::vector<double>& scores) {
    std::vector<FogCandidate> v;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        FogCandidate c;
        c.id = int(k);
        c.prof = {0.0, 0.0};
        c.mu_tx = scores[k];
        c.arrival_index = int(k) + 1;
        v.push_back(c);
    }
    return v;
}

// 3. hand trace and agreement with an independent simulator
Verdict selection_trace() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto trace = online_secretary(stream_of({3, 7, 5, 6, 8, 4, 9}), 3, 2);
    std::vector<double> picked;
    for (const auto& c : trace.chosen) picked.push_back(score(c));
    const bool trace_ok = picked == std::vector<double>{8, 9};

    Rng rng(2026, 0);
    int agree = 0;
    for (int k = 0; k < kTraceStreams; ++k) {
        const std::size_t n = 1 + rng.below(20);
        const std::size_t tau = rng.below(8);
        const std::size_t J = 1 + rng.below(6);
        std::vector<double> scores(n);
        // small integer scores force ties often
        for (auto& s : scores) s = k % 2 ? double(rng.below(10)) : rng.uniform(0.0, 100.0);
        const auto got = online_secretary(stream_of(scores), tau, J);
        const auto want = testing::reference_secretary(scores, tau, J);
        bool same = got.chosen.size() == want.size();
        for (std::size_t m = 0; same && m < want.size(); ++m) same = got.chosen[m].arrival_index == int(want[m]) + 1;
        if (same) ++agree;
    }
    Verdict v{trace_ok && agree == kTraceStreams,
              std::string("trace ") + (trace_ok ? "{8,9}" : "wrong") + ", " + std::to_string(agree) + "/" +
                  std::to_string(kTraceStreams) + " streams agree"};
    return within_time(v, t0, kTraceSeconds);
}

// 4. competitive ratio distribution
Verdict ratio_bounds() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.n_candidates = 15;
    c.tau = 3;
    c.J = 2;
    c.neighbor_mu_tx.reset();
    c.iterations = kRatioIterations;
    auto r = competitive_ratios(c);
    std::sort(r.begin(), r.end());
    const bool in_range = r.front() > 0.0 && r.back() <= 1.0;
    const double at_one = double(std::count(r.begin(), r.end(), 1.0)) / double(r.size());
    const double median = 0.5 * (r[(r.size() - 1) / 2] + r[r.size() / 2]);
    const bool pass = in_range && at_one >= kRatioAtOneMin && median >= kRatioMedianMin && r.front() >= kRatioFloor;
    Verdict v{pass, "min " + fmt(r.front()) + ", max " + fmt(r.back()) + ", median " + fmt(median) + ", at 1 " +
                        fmt(100 * at_one, 4) + "%"};
    return within_time(v, t0, kRatioSeconds);
}

// 5. offline trends in fixed-rate mode
Verdict offline_trends() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.neighbor_mu_tx = 20.0;
    c.mu_c = 8.8;
    c.mu_ij_values = {20.0};
    c.j_min = 0;
    c.j_max = 7;
    c.iterations = kTrendIterations;
    const Table t = run_offline_sweep(c);
    bool ok = t.rows.size() == 8;
    for (std::size_t k = 0; ok && k < t.rows.size(); ++k) ok = t.at(k, "feasible") == 1.0;
    bool lat_down = ok, cloud_down = ok;
    for (std::size_t k = 1; ok && k < t.rows.size(); ++k) {
        lat_down = lat_down && t.at(k, "max_latency") < t.at(k - 1, "max_latency");
        cloud_down = cloud_down && t.at(k, "share_cloud") <= t.at(k - 1, "share_cloud");
    }
    const double s0 = ok ? t.at(0, "share_cloud") : 0.0, s6 = ok ? t.at(6, "share_cloud") : 0.0;
    const int J = choose_j(c).J;
    const bool pass = lat_down && cloud_down && std::fabs(s0 - kShareJ0) <= kShareTol &&
                      std::fabs(s6 - kShareJ6) <= kShareTol && J == kExpectedJ;
    Verdict v{pass, std::string("latency ") + (lat_down ? "decreasing" : "NOT decreasing") + ", cloud share " +
                        (cloud_down ? "non-increasing" : "INCREASING") + ", J=0 " + fmt(100 * s0, 4) + "%, J=6 " +
                        fmt(100 * s6, 4) + "%, choose_j " + std::to_string(J)};
    return within_time(v, t0, kTrendSeconds);
}

// 6. link-rate sensitivity at J = 4
Verdict rate_sensitivity() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.mu_c = 8.8;
    c.mu_ij_values = {20.0, 30.0};
    c.j_min = 4;
    c.j_max = 4;
    const Table t = run_offline_sweep(c);
    const double slow = t.at(0, "total_cost"), fast = t.at(1, "total_cost");
    const double drop = (slow - fast) / slow;
    Verdict v{std::fabs(drop - kSensitivityDrop) <= kSensitivityTol,
              "cost " + fmt(slow) + " -> " + fmt(fast) + ", drop " + fmt(100 * drop, 4) + "%"};
    return within_time(v, t0, kSensitivitySeconds);
}

// 7. online vs offline cost
Verdict online_gap() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.iterations = kGapIterations;
    c.j_min = 6;
    c.j_max = 6;
    const auto res = run_online_vs_offline(c);
    std::size_t violations = 0, infeasible = 0;
    for (const auto& s : res.samples[0]) {
        if (!s.feasible) {
            ++infeasible;
            continue;
        }
        if (s.online_cost < s.offline_cost) ++violations;
    }
    const double gap = res.table.at(0, "cost_gap");
    Verdict v{violations == 0 && infeasible == 0 && gap <= kGapMax,
              "mean gap at J=6 " + fmt(100 * gap, 4) + "%, " + std::to_string(violations) +
                  " iterations with online < offline, " + std::to_string(infeasible) + " infeasible"};
    return within_time(v, t0, kGapSeconds);
}

// 8. cloud share vs base-station distance
Verdict distance_trend() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.J = 2;
    c.iterations = kDistanceIterations;
    c.distances_m = {200, 300, 400, 500, 600};
    const Table t = run_distance_sweep(c);
    bool down = true;
    std::string shares;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        if (k && !(t.at(k, "share_cloud") < t.at(k - 1, "share_cloud"))) down = false;
        if (t.at(k, "feasible") != double(kDistanceIterations)) down = false;
        shares += (k ? " " : "") + fmt(100 * t.at(k, "share_cloud"), 4) + "%";
    }
    const double drop = (t.at(0, "share_cloud") - t.at(4, "share_cloud")) / t.at(0, "share_cloud");
    Verdict v{down && drop >= kDistanceDropMin, "cloud share " + shares + ", drop " + fmt(100 * drop, 4) + "%"};
    return within_time(v, t0, kDistanceSeconds);
}

// 9. byte-identical output across reruns and worker counts
Verdict determinism() {
    ScenarioConfig c;
    c.iterations = kDeterminismIterations;
    std::string bad;
    for (const auto& name : cli::experiment_names()) {
        const std::string a = csv_of(cli::run_experiment(name, c, 1).table);
        const std::string b = csv_of(cli::run_experiment(name, c, 8).table);
        const std::string a2 = csv_of(cli::run_experiment(name, c, 1).table);
        if (a != b || a != a2) bad += " " + name;
    }
    return {bad.empty(), bad.empty() ? "all experiments byte-identical for workers 1 and 8" : "differs:" + bad};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
        {"oracle equivalence", oracle_equivalence}, {"equal latency", equal_latency},
        {"selection trace", selection_trace},       {"competitive ratio bounds", ratio_bounds},
        {"offline trends", offline_trends},         {"link rate sensitivity", rate_sensitivity},
        {"online vs offline gap", online_gap},      {"distance trend", distance_trend},
        {"determinism", determinism}};
    return all;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fogform acceptance suite"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (std::size_t k = 0; k < criteria().size(); ++k) {
        if (only && int(k) + 1 != only) continue;
        Verdict v;
        try {
            v = criteria()[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu (%s): %s - %s\n", k + 1, criteria()[k].first.c_str(), v.pass ? "PASS" : "FAIL",
                    v.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && v.pass;
    }
    return all_pass ? 0 : 1;
}
