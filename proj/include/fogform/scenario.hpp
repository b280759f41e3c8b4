#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogform/errors.hpp"
#include "fogform/queueing.hpp"
#include "fogform/rng.hpp"
#include "fogform/selection.hpp"

namespace fogform {

/// Radio constants as configured (dBm, bytes). Converted once per run by params().
struct RadioConfig {
    double bandwidth_hz = 15e3;
    double noise_psd_dbm_per_hz = -174.0;
    double tx_power_dbm = 20.0;
    double pathloss_const = 1e-3;
    double pathloss_exp = 4.0;
    double packet_size_bytes = 1500.0;

    RadioParams params() const {
        return RadioParams::from_dbm(bandwidth_hz, noise_psd_dbm_per_hz, tx_power_dbm, pathloss_const,
                                     pathloss_exp, packet_size_bytes);
    }
};

/// Everything needed to reproduce a run. Defaults are the calibrated setup:
/// x_i = 10 puts 60% of tasks on the cloud with no neighbors and 32% with six,
/// eta = 0.011 makes four neighbors the cheapest offline network at mu_ij = 20.
struct ScenarioConfig {
    double area_m = 50.0;
    int n_candidates = 15;
    std::optional<Position> initiator;  // square center when unset
    double bs_distance_m = 600.0;
    RadioConfig radio;
    ComputeProfile local_prof{8.0, 0.05};
    ComputeProfile neighbor_prof{8.0, 0.05};
    std::optional<double> neighbor_mu_tx;  // fixed link rate for every candidate; geometric when unset
    std::optional<double> mu_c = 8.8;      // derived from bs_distance_m when unset
    double c_c = 0.025;
    double x_i = 10.0;
    double eta = 0.011;
    int tau = 3;
    int J = 2;
    std::uint64_t seed = 1;
    int iterations = 1000;
    bool fill_at_stream_end = true;

    // sweep ranges
    int j_min = 0;
    int j_max = 7;
    std::vector<double> mu_ij_values{20.0, 30.0};
    std::vector<double> distances_m{200.0, 300.0, 400.0, 500.0, 600.0};
};

inline void validate(const ScenarioConfig& c) {
    const auto positive = [](const char* key, double v) {
        if (!(v > 0.0)) throw ConfigError(key, "must be positive");
    };
    positive("area_m", c.area_m);
    positive("bs_distance_m", c.bs_distance_m);
    positive("radio.bandwidth_hz", c.radio.bandwidth_hz);
    positive("radio.pathloss_const", c.radio.pathloss_const);
    positive("radio.pathloss_exp", c.radio.pathloss_exp);
    positive("radio.packet_size_bytes", c.radio.packet_size_bytes);
    positive("local.mu", c.local_prof.mu);
    positive("neighbor.mu", c.neighbor_prof.mu);
    positive("x_i", c.x_i);
    if (c.local_prof.c < 0.0) throw ConfigError("local.c", "must be non-negative");
    if (c.neighbor_prof.c < 0.0) throw ConfigError("neighbor.c", "must be non-negative");
    if (c.c_c < 0.0) throw ConfigError("cloud.c_c", "must be non-negative");
    if (c.eta < 0.0) throw ConfigError("eta", "must be non-negative");
    if (c.neighbor_mu_tx) positive("neighbor_mu_tx", *c.neighbor_mu_tx);
    if (c.mu_c) positive("cloud.mu_c", *c.mu_c);
    if (c.n_candidates < 0) throw ConfigError("n_candidates", "must be non-negative");
    if (c.tau < 0) throw ConfigError("tau", "must be non-negative");
    if (c.J < 0) throw ConfigError("J", "must be non-negative");
    if (c.iterations < 1) throw ConfigError("iterations", "must be at least 1");
    if (c.j_min < 0 || c.j_max < c.j_min) throw ConfigError("j_min", "need 0 <= j_min <= j_max");
    for (double m : c.mu_ij_values) positive("mu_ij_values", m);
    for (double d : c.distances_m) positive("distances_m", d);
    if (c.initiator && !(std::isfinite(c.initiator->x) && std::isfinite(c.initiator->y)))
        throw ConfigError("initiator", "coordinates must be finite");
}

inline Position initiator_position(const ScenarioConfig& c) {
    return c.initiator.value_or(Position{c.area_m / 2.0, c.area_m / 2.0});
}

/// Initiator -> base station rate: configured value, or the radio model at bs_distance_m.
inline double cloud_rate(const ScenarioConfig& c, const RadioParams& radio) {
    return c.mu_c ? *c.mu_c : service_rate(c.bs_distance_m, radio);
}

/// N candidates uniform over the square, in a uniformly random arrival order.
inline std::vector<FogCandidate> generate_scenario(const ScenarioConfig& c, const RadioParams& radio, Rng& rng) {
    const Position origin = initiator_position(c);
    std::vector<FogCandidate> out;
    out.reserve(static_cast<std::size_t>(c.n_candidates));
    for (int k = 0; k < c.n_candidates; ++k) {
        FogCandidate cand;
        cand.id = k;
        double d = 0.0;
        do {
            cand.position = {rng.uniform(0.0, c.area_m), rng.uniform(0.0, c.area_m)};
            d = distance(cand.position, origin);
        } while (!(d > 0.0));
        cand.mu_tx = c.neighbor_mu_tx ? *c.neighbor_mu_tx : service_rate(d, radio);
        cand.prof = c.neighbor_prof;
        out.push_back(cand);
    }
    rng.shuffle(out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k].arrival_index = static_cast<int>(k) + 1;
    return out;
}

inline std::vector<FogCandidate> generate_scenario(const ScenarioConfig& c, Rng& rng) {
    return generate_scenario(c, c.radio.params(), rng);
}

/// Node set for the initiator with the given neighbors and cloud rate.
inline NodeSet make_node_set(const ScenarioConfig& c, std::span<const FogCandidate> neighbors, double mu_c) {
    NodeSet ns;
    ns.local = c.local_prof;
    ns.cloud = CloudLink{mu_c, c.c_c};
    ns.x_i = c.x_i;
    for (const auto& n : neighbors) ns.neighbors.push_back(to_link(n));
    return ns;
}

} // namespace fogform
