#pragma once

// Choosing which neighboring fog nodes join the network.
//
// Each candidate is scored by link rate plus compute rate. The offline
// selection knows every candidate and keeps the J best. The online selection
// sees candidates one at a time and must accept or reject each on arrival:
// it watches the first tau arrivals to collect thresholds, then accepts any
// later arrival that beats the largest remaining threshold, consuming that
// threshold on acceptance.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fogform/errors.hpp"
#include "fogform/queueing.hpp"
#include "fogform/solver.hpp"

namespace fogform {

struct FogCandidate {
    int id = 0;
    Position position;
    double mu_tx = 0.0;       // initiator -> candidate link rate
    ComputeProfile prof;      // candidate compute capability
    int arrival_index = 0;    // 1-based position in the arrival stream
};

inline double score(const FogCandidate& c) { return c.mu_tx + c.prof.mu; }

inline NeighborLink to_link(const FogCandidate& c) { return {c.mu_tx, c.prof}; }

/// Observed scores from the exploration phase. Only the maximum is ever queried
/// or removed.
class ThresholdSet {
public:
    void insert(double v) { values_.push_back(v); }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    /// Current acceptance threshold; -infinity once every threshold is consumed.
    double max() const {
        if (values_.empty()) return -std::numeric_limits<double>::infinity();
        return *std::max_element(values_.begin(), values_.end());
    }

    void remove_max() {
        if (values_.empty()) return;
        values_.erase(std::max_element(values_.begin(), values_.end()));
    }

    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

struct SelectionOutcome {
    std::vector<FogCandidate> chosen;  // in stream order for online selection
    std::size_t target = 0;            // J
    double scores_sum = 0.0;
    std::vector<SolveReport> solve_trace;
    std::optional<SolveReport> final_report;
    std::optional<double> competitive_ratio;
    bool truncated = false;            // stream ran out before |chosen| == target
    /// Threshold t* in force at each acceptance, aligned with chosen.
    std::vector<double> acceptance_thresholds;
    std::size_t forced_acceptances = 0;
};

/// Sum of scores taken in descending order, so equal sets give equal sums
/// whatever order they were chosen in.
inline double score_sum(std::span<const FogCandidate> chosen) {
    std::vector<double> v;
    v.reserve(chosen.size());
    for (const auto& c : chosen) v.push_back(score(c));
    std::sort(v.begin(), v.end(), std::greater<>());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

/// The J highest-scoring candidates; ties go to the earlier arrival. Returned
/// in descending score order.
inline SelectionOutcome offline_top_j(std::span<const FogCandidate> candidates, std::size_t J) {
    if (J > candidates.size()) throw DomainError("offline_top_j: J exceeds the number of candidates");
    std::vector<FogCandidate> sorted(candidates.begin(), candidates.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const FogCandidate& a, const FogCandidate& b) {
        const double sa = score(a), sb = score(b);
        if (sa != sb) return sa > sb;
        return a.arrival_index < b.arrival_index;
    });
    SelectionOutcome out;
    out.target = J;
    out.chosen.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(J));
    out.scores_sum = score_sum(out.chosen);
    return out;
}

/// Re-solves the task distribution after an acceptance. Receives the current
/// chosen set in acceptance order.
using SolverHook = std::function<SolveReport(std::span<const FogCandidate>)>;

struct OnlineOptions {
    /// When the arrivals left in the stream exactly match the open slots, accept
    /// them regardless of threshold. Requires the stream length to be known.
    bool fill_at_stream_end = false;
};

/// Online selection over an arrival stream.
///
/// Arrivals 1..tau only feed the threshold set. Every later arrival is accepted
/// iff its score is strictly greater than the current maximum threshold, which
/// is then removed. An empty threshold set accepts everything. Stops once J
/// candidates are chosen or the stream ends.
inline SelectionOutcome online_secretary(std::span<const FogCandidate> stream, std::size_t tau, std::size_t J,
                                         const SolverHook& hook = {}, OnlineOptions opt = {}) {
    if (J < 1) throw DomainError("online_secretary: J must be at least 1");
    SelectionOutcome out;
    out.target = J;
    if (stream.size() < tau) {
        out.truncated = true;
        return out;
    }

    ThresholdSet thresholds;
    for (std::size_t n = 0; n < tau; ++n) thresholds.insert(score(stream[n]));

    for (std::size_t n = tau; n < stream.size() && out.chosen.size() < J; ++n) {
        const FogCandidate& arrival = stream[n];
        const double s = score(arrival);
        const double t_star = thresholds.max();
        const std::size_t left = stream.size() - n;
        const bool forced = opt.fill_at_stream_end && left <= J - out.chosen.size();
        if (s > t_star || forced) {
            if (!(s > t_star)) ++out.forced_acceptances;
            out.acceptance_thresholds.push_back(t_star);
            out.chosen.push_back(arrival);
            thresholds.remove_max();
            if (hook) out.solve_trace.push_back(hook(out.chosen));
        }
    }
    out.truncated = out.chosen.size() < J;
    out.scores_sum = score_sum(out.chosen);
    if (!out.solve_trace.empty()) out.final_report = out.solve_trace.back();
    return out;
}

/// Online score sum over offline score sum; empty slots count as zero.
inline double competitive_ratio(const SelectionOutcome& online, const SelectionOutcome& offline) {
    if (online.target != offline.target) throw DomainError("competitive_ratio: outcomes use different J");
    if (!(offline.scores_sum > 0.0)) throw DomainError("competitive_ratio: offline score sum is zero");
    return online.scores_sum / offline.scores_sum;
}

} // namespace fogform
