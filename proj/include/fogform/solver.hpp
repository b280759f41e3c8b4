#pragma once

// Min-max task distribution for a fixed set of computation paths.
//
// The optimum equalizes the delay of every path that carries load. Each path
// delay is strictly increasing in its share, so for a candidate common delay D
// the share a path can take is found by bisection (load_for_delay), and the
// total g(D) of those shares is non-decreasing in D. An outer bisection on D
// finds g(D) = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fogform/errors.hpp"
#include "fogform/queueing.hpp"

namespace fogform {

struct CloudLink {
    double mu_tx = 8.8;  // initiator -> base station service rate
    double c = 0.025;
};

struct NeighborLink {
    double mu_tx = 20.0;
    ComputeProfile prof;
};

/// Computation graph for one solve: local node, optional cloud, selected neighbors.
struct NodeSet {
    ComputeProfile local;
    std::optional<CloudLink> cloud = CloudLink{};
    std::vector<NeighborLink> neighbors;
    double x_i = 10.0;

    /// Paths in canonical order: local, cloud (if present), neighbors.
    std::vector<Path> paths() const {
        std::vector<Path> out;
        out.reserve(2 + neighbors.size());
        out.push_back(Path::local(local));
        if (cloud) out.push_back(Path::cloud(cloud->mu_tx, cloud->c));
        for (const auto& n : neighbors) out.push_back(Path::fog(n.mu_tx, n.prof));
        return out;
    }
};

/// Shares of x_i routed to each path. Entries lie in [0,1] and sum to one.
struct TaskDistribution {
    double alpha_local = 1.0;
    double alpha_cloud = 0.0;
    std::vector<double> alpha_fog;

    double fog_total() const {
        double s = 0.0;
        for (double a : alpha_fog) s += a;
        return s;
    }
    double sum() const { return alpha_local + alpha_cloud + fog_total(); }

    /// Flattened in the order of NodeSet::paths().
    std::vector<double> flat(bool has_cloud) const {
        std::vector<double> v;
        v.push_back(alpha_local);
        if (has_cloud) v.push_back(alpha_cloud);
        v.insert(v.end(), alpha_fog.begin(), alpha_fog.end());
        return v;
    }

    static TaskDistribution from_flat(const std::vector<double>& v, bool has_cloud) {
        TaskDistribution d;
        std::size_t i = 0;
        d.alpha_local = v.at(i++);
        d.alpha_cloud = has_cloud ? v.at(i++) : 0.0;
        d.alpha_fog.assign(v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
        return d;
    }
};

struct SolveReport {
    TaskDistribution distribution;
    double common_delay = 0.0;
    /// Ordered as NodeSet::paths(); zero-load delay for inactive paths.
    std::vector<double> per_path_delays;
    std::vector<bool> active_mask;
    double max_delay = 0.0;
    double total_cost = 0.0;
};

inline double total_cost(const SolveReport& report, double eta, std::size_t num_neighbors) {
    return report.max_delay + eta * static_cast<double>(num_neighbors + 1);
}

struct SolverOptions {
    double tol = 1e-12;            // bracket width on D, and on g(D) - 1
    double alpha_tol = 1e-12;      // inner bisection width on alpha
    double margin = kStabilityMargin;
    double max_delay_bound = 1e12; // give up growing the outer bracket here
};

/// Largest share of x_i the path can carry within its stability margin, capped at 1.
inline double max_share(const Path& p, double x_i, double margin = kStabilityMargin) {
    if (!(x_i > 0.0)) return 1.0;
    const double cap = usable_cap(p, margin);
    double s = std::min(1.0, cap / x_i);
    // rounding can put s * x_i one ulp above the cap
    while (s * x_i > cap) s = std::nextafter(s, 0.0);
    return s;
}

/// Share alpha such that path_delay(p, alpha, x_i) == target_delay, clipped to
/// [0, max_share]. Returns 0 when the zero-load delay already reaches the target.
inline double load_for_delay(const Path& p, double target_delay, double x_i,
                             const SolverOptions& opt = {}) {
    if (!(target_delay > 0.0)) throw DomainError("load_for_delay: target delay must be positive");
    if (!(x_i > 0.0)) throw DomainError("load_for_delay: input rate must be positive");
    if (zero_load_delay(p) >= target_delay) return 0.0;
    const double hi_share = max_share(p, x_i, opt.margin);
    if (path_delay(p, hi_share, x_i, opt.margin) <= target_delay) return hi_share;

    double lo = 0.0;
    double hi = hi_share;
    while (hi - lo > opt.alpha_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (path_delay(p, mid, x_i, opt.margin) < target_delay)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

inline std::string describe_caps(const std::vector<Path>& paths, double x_i, double margin) {
    std::ostringstream os;
    os.precision(6);
    double total = 0.0;
    os << "input rate x_i=" << x_i << " exceeds total path capacity; per-path caps:";
    for (const auto& p : paths) {
        const double cap = usable_cap(p, margin);
        total += cap;
        os << ' ' << to_string(p.kind) << '=' << cap;
    }
    os << " (sum " << total << ", shortfall " << x_i - total << " packets/s)";
    return os.str();
}

inline std::vector<double> caps_of(const std::vector<Path>& paths, double margin) {
    std::vector<double> caps;
    for (const auto& p : paths) caps.push_back(usable_cap(p, margin));
    return caps;
}

} // namespace detail

/// Sum of per-path shares at common delay D.
inline double share_sum(const std::vector<Path>& paths, double D, double x_i, const SolverOptions& opt = {}) {
    double s = 0.0;
    for (const auto& p : paths) s += load_for_delay(p, D, x_i, opt);
    return s;
}

/// Evaluates an arbitrary distribution against the forward delay model.
inline SolveReport evaluate(const NodeSet& nodes, const TaskDistribution& dist, double eta,
                            double margin = kStabilityMargin) {
    const auto paths = nodes.paths();
    const auto alphas = dist.flat(nodes.cloud.has_value());
    if (alphas.size() != paths.size()) throw DomainError("evaluate: distribution does not match node set");
    SolveReport r;
    r.distribution = dist;
    r.per_path_delays.resize(paths.size());
    r.active_mask.resize(paths.size());
    for (std::size_t k = 0; k < paths.size(); ++k) {
        r.per_path_delays[k] = path_delay(paths[k], alphas[k], nodes.x_i, margin);
        r.active_mask[k] = alphas[k] > 0.0;
        if (r.active_mask[k]) r.max_delay = std::max(r.max_delay, r.per_path_delays[k]);
    }
    r.common_delay = r.max_delay;
    r.total_cost = total_cost(r, eta, nodes.neighbors.size());
    return r;
}

/// Minimizes the maximum delay over loaded paths.
///
/// Paths whose zero-load delay is at or above the optimal common delay get no
/// share and do not count toward the maximum. Throws InfeasibleError when x_i
/// exceeds the summed stability caps.
inline SolveReport solve_distribution(const NodeSet& nodes, double eta, const SolverOptions& opt = {}) {
    if (!(nodes.x_i > 0.0)) throw DomainError("solve_distribution: input rate must be positive");
    const auto paths = nodes.paths();
    const double x = nodes.x_i;

    double reachable = 0.0;
    for (const auto& p : paths) reachable += max_share(p, x, opt.margin);
    if (reachable < 1.0)
        throw InfeasibleError(detail::describe_caps(paths, x, opt.margin), x, detail::caps_of(paths, opt.margin));

    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : paths) lo = std::min(lo, zero_load_delay(p));
    double hi = std::max(1.0, 2.0 * lo);
    while (share_sum(paths, hi, x, opt) < 1.0) {
        hi *= 2.0;
        if (hi > opt.max_delay_bound)
            throw InfeasibleError(detail::describe_caps(paths, x, opt.margin), x,
                                  detail::caps_of(paths, opt.margin));
    }

    while (hi - lo > opt.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g = share_sum(paths, mid, x, opt);
        if (g < 1.0) {
            lo = mid;
        } else {
            hi = mid;
            if (g - 1.0 <= opt.tol) break;
        }
    }
    const double D = hi;

    std::vector<double> alpha(paths.size());
    std::vector<double> caps(paths.size());
    double s = 0.0;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        alpha[k] = load_for_delay(paths[k], D, x, opt);
        caps[k] = max_share(paths[k], x, opt.margin);
        s += alpha[k];
    }
    // Close the simplex: shrink proportionally, or hand the deficit to the path
    // with the most headroom.
    if (s > 1.0) {
        for (auto& a : alpha) a /= s;
    } else if (s < 1.0) {
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < paths.size(); ++k)
            if (alpha[k] > 0.0 && (!best || caps[k] - alpha[k] > caps[*best] - alpha[*best])) best = k;
        if (best) alpha[*best] = std::min(caps[*best], alpha[*best] + (1.0 - s));
    }

    SolveReport r = evaluate(nodes, TaskDistribution::from_flat(alpha, nodes.cloud.has_value()), eta, opt.margin);
    return r;  // common_delay is the delay the active paths actually share
}

/// Brute-force minimizer over the simplex grid with step 1/resolution.
///
/// Independent of solve_distribution: only forward delay evaluations are used.
/// Limited to 4 paths and resolution 400.
inline TaskDistribution grid_oracle(const NodeSet& nodes, int resolution, double margin = kStabilityMargin) {
    const auto paths = nodes.paths();
    if (paths.size() > 4) throw DomainError("grid_oracle: refusing more than 4 paths");
    if (resolution < 1 || resolution > 400) throw DomainError("grid_oracle: resolution must be in [1, 400]");
    const double x = nodes.x_i;
    const std::size_t n = paths.size();

    std::vector<int> counts(n, 0);
    std::vector<int> best_counts;
    double best = std::numeric_limits<double>::infinity();

    const auto visit = [&]() {
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (counts[k] == 0) continue;
            const double a = static_cast<double>(counts[k]) / resolution;
            if (a * x > (1.0 - margin) * stability_cap(paths[k])) return;
            worst = std::max(worst, path_delay(paths[k], a, x, margin));
        }
        if (worst < best) {
            best = worst;
            best_counts = counts;
        }
    };
    const auto recurse = [&](auto&& self, std::size_t k, int remaining) -> void {
        if (k + 1 == n) {
            counts[k] = remaining;
            visit();
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[k] = c;
            self(self, k + 1, remaining - c);
        }
    };
    recurse(recurse, 0, resolution);

    if (best_counts.empty())
        throw InfeasibleError("grid_oracle: no stable grid point", x, detail::caps_of(paths, margin));
    std::vector<double> alpha(n);
    for (std::size_t k = 0; k < n; ++k) alpha[k] = static_cast<double>(best_counts[k]) / resolution;
    return TaskDistribution::from_flat(alpha, nodes.cloud.has_value());
}

} // namespace fogform
