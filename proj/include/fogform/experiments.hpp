#pragma once

// Monte Carlo experiment runners. Iteration i always draws its scenario from
// Rng(seed, i), results are stored by index, and reductions run in index order,
// so the output does not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "fogform/errors.hpp"
#include "fogform/scenario.hpp"
#include "fogform/selection.hpp"
#include "fogform/solver.hpp"

namespace fogform {

/// Numeric CSV table; one header row, one row per record.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row) {
        if (row.size() != columns.size()) throw DomainError("Table::add: row width mismatch");
        rows.push_back(std::move(row));
    }

    double at(std::size_t row, const std::string& column) const {
        const auto it = std::find(columns.begin(), columns.end(), column);
        if (it == columns.end()) throw DomainError("Table::at: unknown column " + column);
        return rows.at(row).at(static_cast<std::size_t>(it - columns.begin()));
    }
};

/// Shortest round-trippable text for integers, %.17g otherwise.
inline std::string format_number(double v) {
    char buf[40];
    if (std::isfinite(v) && v == std::nearbyint(v) && std::fabs(v) < 1e15)
        std::snprintf(buf, sizeof buf, "%.0f", v);
    else
        std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_number(row[k]);
        os << '\n';
    }
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads; results indexed by i.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, Fn fn) {
    std::vector<T> out(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// Neighbors sorted by descending score then arrival, so equal sets solve identically.
inline std::vector<FogCandidate> canonical_order(std::span<const FogCandidate> chosen) {
    std::vector<FogCandidate> v(chosen.begin(), chosen.end());
    std::sort(v.begin(), v.end(), [](const FogCandidate& a, const FogCandidate& b) {
        if (score(a) != score(b)) return score(a) > score(b);
        return a.arrival_index < b.arrival_index;
    });
    return v;
}

/// Solves the distribution over a selected neighbor set; nullopt when infeasible.
inline std::optional<SolveReport> solve_for(const ScenarioConfig& cfg, std::span<const FogCandidate> chosen,
                                            double mu_c) {
    try {
        return solve_distribution(make_node_set(cfg, canonical_order(chosen), mu_c), cfg.eta);
    } catch (const InfeasibleError&) {
        return std::nullopt;
    }
}

inline double share_cloud(const SolveReport& r) { return r.distribution.alpha_cloud; }

/// One online selection with the config's tau and fill policy.
inline SelectionOutcome select_online(const ScenarioConfig& cfg, std::span<const FogCandidate> stream,
                                      std::size_t J) {
    OnlineOptions opt;
    opt.fill_at_stream_end = cfg.fill_at_stream_end;
    return online_secretary(stream, static_cast<std::size_t>(cfg.tau), J, {}, opt);
}

namespace detail {

inline void require_candidates(const ScenarioConfig& cfg, int J, bool online) {
    const int need = online ? cfg.tau + J : J;
    if (cfg.n_candidates < need)
        throw ConfigError("n_candidates", "need at least " + std::to_string(need) + " candidates");
}

} // namespace detail

// ---------------------------------------------------------------------------
// offline sweep: fixed link rate per neighbor, top-J offline selection

inline Table run_offline_sweep(const ScenarioConfig& cfg) {
    validate(cfg);
    detail::require_candidates(cfg, cfg.j_max, false);
    const RadioParams radio = cfg.radio.params();
    const double mu_c = cloud_rate(cfg, radio);
    Table t{{"mu_ij", "J", "feasible", "max_latency", "total_cost", "share_local", "share_cloud", "share_fog"}, {}};
    for (double mu_ij : cfg.mu_ij_values) {
        ScenarioConfig fixed = cfg;
        fixed.neighbor_mu_tx = mu_ij;
        Rng rng(cfg.seed, 0);
        const auto candidates = generate_scenario(fixed, radio, rng);
        for (int J = cfg.j_min; J <= cfg.j_max; ++J) {
            const auto best = offline_top_j(candidates, static_cast<std::size_t>(J));
            const auto r = solve_for(fixed, best.chosen, mu_c);
            if (!r) {
                t.add({mu_ij, double(J), 0, 0, 0, 0, 0, 0});
                continue;
            }
            t.add({mu_ij, double(J), 1, r->max_delay, r->total_cost, r->distribution.alpha_local,
                   r->distribution.alpha_cloud, r->distribution.fog_total()});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// online vs offline

struct CostSample {
    bool feasible = false;
    double online_cost = 0.0;
    double offline_cost = 0.0;
    double online_latency = 0.0;
    double offline_latency = 0.0;
    bool online_filled = false;
};

/// samples[j - first_J][iteration]
struct OnlineOfflineResult {
    int first_J = 1;
    std::vector<std::vector<CostSample>> samples;
    Table table;
};

inline OnlineOfflineResult run_online_vs_offline(const ScenarioConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    const int first = std::max(1, cfg.j_min);
    const int last = std::max(first, cfg.j_max);
    detail::require_candidates(cfg, last, true);
    const RadioParams radio = cfg.radio.params();
    const double mu_c = cloud_rate(cfg, radio);
    const std::size_t nJ = static_cast<std::size_t>(last - first + 1);

    const auto per_iter = parallel_map<std::vector<CostSample>>(
        static_cast<std::size_t>(cfg.iterations), workers, [&](std::size_t i) {
            Rng rng(cfg.seed, i);
            const auto cands = generate_scenario(cfg, radio, rng);
            std::vector<CostSample> row(nJ);
            for (std::size_t k = 0; k < nJ; ++k) {
                const auto J = static_cast<std::size_t>(first) + k;
                const auto on = select_online(cfg, cands, J);
                const auto off = offline_top_j(cands, J);
                const auto r_on = solve_for(cfg, on.chosen, mu_c);
                const auto r_off = solve_for(cfg, off.chosen, mu_c);
                CostSample& s = row[k];
                s.online_filled = !on.truncated;
                s.feasible = r_on && r_off;
                if (!s.feasible) continue;
                s.online_cost = r_on->total_cost;
                s.offline_cost = r_off->total_cost;
                s.online_latency = r_on->max_delay;
                s.offline_latency = r_off->max_delay;
            }
            return row;
        });

    OnlineOfflineResult res;
    res.first_J = first;
    res.samples.assign(nJ, std::vector<CostSample>(per_iter.size()));
    for (std::size_t i = 0; i < per_iter.size(); ++i)
        for (std::size_t k = 0; k < nJ; ++k) res.samples[k][i] = per_iter[i][k];

    res.table.columns = {"J",           "iterations",     "feasible",       "online_cost",    "offline_cost",
                         "cost_gap",    "online_latency", "offline_latency", "latency_gap",    "filled_fraction"};
    for (std::size_t k = 0; k < nJ; ++k) {
        double on_c = 0, off_c = 0, on_l = 0, off_l = 0, filled = 0;
        std::size_t ok = 0;
        for (const auto& s : res.samples[k]) {
            filled += s.online_filled ? 1.0 : 0.0;
            if (!s.feasible) continue;
            ++ok;
            on_c += s.online_cost;
            off_c += s.offline_cost;
            on_l += s.online_latency;
            off_l += s.offline_latency;
        }
        const double n = ok ? double(ok) : 1.0;
        on_c /= n, off_c /= n, on_l /= n, off_l /= n;
        res.table.add({double(first + int(k)), double(cfg.iterations), double(ok), on_c, off_c,
                       off_c > 0 ? (on_c - off_c) / off_c : 0.0, on_l, off_l,
                       off_l > 0 ? (on_l - off_l) / off_l : 0.0, filled / double(cfg.iterations)});
    }
    return res;
}

// ---------------------------------------------------------------------------
// competitive ratio distribution

/// One competitive ratio per iteration, in iteration order.
inline std::vector<double> competitive_ratios(const ScenarioConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    if (cfg.J < 1) throw ConfigError("J", "online selection needs J >= 1");
    detail::require_candidates(cfg, cfg.J, true);
    const RadioParams radio = cfg.radio.params();
    const auto J = static_cast<std::size_t>(cfg.J);
    return parallel_map<double>(static_cast<std::size_t>(cfg.iterations), workers, [&](std::size_t i) {
        Rng rng(cfg.seed, i);
        const auto cands = generate_scenario(cfg, radio, rng);
        return competitive_ratio(select_online(cfg, cands, J), offline_top_j(cands, J));
    });
}

/// Sorted ratios with their empirical CDF level rank / iterations.
inline Table run_ratio_cdf(const ScenarioConfig& cfg, unsigned workers = 1) {
    auto ratios = competitive_ratios(cfg, workers);
    std::sort(ratios.begin(), ratios.end());
    Table t{{"rank", "ratio", "cdf"}, {}};
    const double n = double(ratios.size());
    for (std::size_t k = 0; k < ratios.size(); ++k) t.add({double(k + 1), ratios[k], double(k + 1) / n});
    return t;
}

// ---------------------------------------------------------------------------
// distance sweep: cloud rate follows the base-station distance

inline Table run_distance_sweep(const ScenarioConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    if (cfg.J < 1) throw ConfigError("J", "online selection needs J >= 1");
    detail::require_candidates(cfg, cfg.J, true);
    const RadioParams radio = cfg.radio.params();
    const auto J = static_cast<std::size_t>(cfg.J);
    const auto& dists = cfg.distances_m;

    struct Shares {
        bool feasible = false;
        double local = 0, cloud = 0, fog = 0, latency = 0;
    };
    const auto per_iter = parallel_map<std::vector<Shares>>(
        static_cast<std::size_t>(cfg.iterations), workers, [&](std::size_t i) {
            Rng rng(cfg.seed, i);
            const auto cands = generate_scenario(cfg, radio, rng);
            const auto on = select_online(cfg, cands, J);
            std::vector<Shares> row(dists.size());
            for (std::size_t k = 0; k < dists.size(); ++k) {
                const auto r = solve_for(cfg, on.chosen, service_rate(dists[k], radio));
                if (!r) continue;
                row[k] = {true, r->distribution.alpha_local, r->distribution.alpha_cloud,
                          r->distribution.fog_total(), r->max_delay};
            }
            return row;
        });

    Table t{{"distance_m", "mu_c", "feasible", "share_local", "share_cloud", "share_fog", "max_latency"}, {}};
    for (std::size_t k = 0; k < dists.size(); ++k) {
        double l = 0, c = 0, f = 0, lat = 0;
        std::size_t ok = 0;
        for (const auto& row : per_iter) {
            if (!row[k].feasible) continue;
            ++ok;
            l += row[k].local, c += row[k].cloud, f += row[k].fog, lat += row[k].latency;
        }
        const double n = ok ? double(ok) : 1.0;
        t.add({dists[k], service_rate(dists[k], radio), double(ok), l / n, c / n, f / n, lat / n});
    }
    return t;
}

// ---------------------------------------------------------------------------
// choosing J

/// Index-aligned costs for J = first, first+1, ...; nullopt marks an infeasible J.
/// Returns the J with the smallest cost, preferring the larger J on ties.
inline int argmin_cost_prefer_larger(std::span<const std::optional<double>> costs, int first) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < costs.size(); ++k) {
        if (!costs[k]) continue;
        if (!best || *costs[k] <= *costs[*best]) best = k;
    }
    if (!best) throw InfeasibleError("choose_j: every J in range is infeasible", 0.0, {});
    return first + static_cast<int>(*best);
}

struct ChooseJResult {
    int J = 0;
    Table table;
};

/// Mean offline total cost for each J in [j_min, j_max]; picks the cheapest.
inline ChooseJResult choose_j(const ScenarioConfig& cfg, unsigned workers = 1) {
    validate(cfg);
    detail::require_candidates(cfg, cfg.j_max, false);
    const RadioParams radio = cfg.radio.params();
    const double mu_c = cloud_rate(cfg, radio);
    const std::size_t nJ = static_cast<std::size_t>(cfg.j_max - cfg.j_min + 1);

    const auto per_iter = parallel_map<std::vector<std::optional<SolveReport>>>(
        static_cast<std::size_t>(cfg.iterations), workers, [&](std::size_t i) {
            Rng rng(cfg.seed, i);
            const auto cands = generate_scenario(cfg, radio, rng);
            std::vector<std::optional<SolveReport>> row(nJ);
            for (std::size_t k = 0; k < nJ; ++k)
                row[k] = solve_for(cfg, offline_top_j(cands, static_cast<std::size_t>(cfg.j_min) + k).chosen, mu_c);
            return row;
        });

    std::vector<std::optional<double>> mean_cost(nJ);
    ChooseJResult res;
    res.table.columns = {"J", "feasible", "mean_total_cost", "mean_latency", "chosen"};
    std::vector<double> mean_latency(nJ, 0.0);
    std::vector<std::size_t> ok(nJ, 0);
    for (std::size_t k = 0; k < nJ; ++k) {
        double cost = 0.0;
        for (const auto& row : per_iter) {
            if (!row[k]) continue;
            ++ok[k];
            cost += row[k]->total_cost;
            mean_latency[k] += row[k]->max_delay;
        }
        // A J counts only when every iteration was feasible.
        if (ok[k] == per_iter.size()) mean_cost[k] = cost / double(ok[k]);
        if (ok[k]) mean_latency[k] /= double(ok[k]);
    }
    res.J = argmin_cost_prefer_larger(mean_cost, cfg.j_min);
    for (std::size_t k = 0; k < nJ; ++k) {
        const int J = cfg.j_min + int(k);
        res.table.add({double(J), double(ok[k]), mean_cost[k].value_or(0.0), mean_latency[k], J == res.J ? 1.0 : 0.0});
    }
    return res;
}

} // namespace fogform
