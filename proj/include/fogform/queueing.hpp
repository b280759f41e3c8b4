#pragma once

// Wireless service-rate model and M/D/1 delay formulas for the three kinds of
// computation path a fog node can route tasks onto: local, neighbor fog node,
// and cloud. All quantities are linear SI: packets/s, seconds, watts, meters.

#include <algorithm>
#include <cmath>
#include <limits>

#include "fogform/errors.hpp"

namespace fogform {

/// Relative stability margin: a queue with rate mu accepts at most (1 - margin) * mu.
inline constexpr double kStabilityMargin = 1e-6;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

/// Physical-layer constants, already converted to linear units.
struct RadioParams {
    double bandwidth_hz = 15e3;
    double noise_psd_w_per_hz = 0.0;
    double tx_power_w = 0.0;
    double pathloss_const = 1e-3;
    double pathloss_exp = 4.0;
    double packet_size_bits = 1500.0 * 8.0;

    /// Builds parameters from the usual dBm / byte units. This is the only place
    /// where logarithmic units are converted.
    static RadioParams from_dbm(double bandwidth_hz, double noise_psd_dbm_per_hz,
                                double tx_power_dbm, double pathloss_const, double pathloss_exp,
                                double packet_size_bytes) {
        if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
        if (!(pathloss_const > 0.0)) throw DomainError("path-loss constant must be positive");
        if (!(pathloss_exp > 0.0)) throw DomainError("path-loss exponent must be positive");
        if (!(packet_size_bytes > 0.0)) throw DomainError("packet size must be positive");
        RadioParams r;
        r.bandwidth_hz = bandwidth_hz;
        r.noise_psd_w_per_hz = dbm_to_watts(noise_psd_dbm_per_hz);
        r.tx_power_w = dbm_to_watts(tx_power_dbm);
        r.pathloss_const = pathloss_const;
        r.pathloss_exp = pathloss_exp;
        r.packet_size_bits = packet_size_bytes * 8.0;
        if (!(r.noise_psd_w_per_hz > 0.0)) throw DomainError("noise PSD must be positive");
        return r;
    }
};

/// Processing capability of a node: mu is the computation-queue service rate
/// (packets/s), c the per-packet computing time (s).
struct ComputeProfile {
    double mu = 8.0;
    double c = 0.05;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Linear path gain beta1 * d^-beta2.
inline double channel_gain(double d, const RadioParams& radio) {
    if (!(d > 0.0)) throw DomainError("channel_gain: distance must be positive");
    return radio.pathloss_const * std::pow(d, -radio.pathloss_exp);
}

/// Shannon-rate packets per second over a link of length d.
inline double service_rate(double d, const RadioParams& radio) {
    const double snr =
        channel_gain(d, radio) * radio.tx_power_w / (radio.bandwidth_hz * radio.noise_psd_w_per_hz);
    return radio.bandwidth_hz * std::log2(1.0 + snr) / radio.packet_size_bits;
}

/// Mean M/D/1 waiting time lambda / (2 mu (mu - lambda)). No stability margin is
/// applied here; only lambda >= mu is rejected.
inline double md1_wait(double lambda, double mu) {
    if (!(lambda >= 0.0) || !(mu > 0.0)) throw DomainError("md1_wait: negative rate");
    if (lambda >= mu) throw InstabilityError(QueueKind::transmission, lambda, mu);
    return lambda / (2.0 * mu * (mu - lambda));
}

/// Transmission queue: waiting plus one deterministic transmission time.
inline double tx_delay(double lambda, double mu_tx) {
    if (!(lambda >= 0.0) || !(mu_tx > 0.0)) throw DomainError("tx_delay: negative rate");
    if (lambda >= mu_tx) throw InstabilityError(QueueKind::transmission, lambda, mu_tx);
    return md1_wait(lambda, mu_tx) + 1.0 / mu_tx;
}

/// Computation queue at a fog node: waiting, fetch time 1/mu, then c * lambda of work.
inline double comp_delay_fog(double lambda, const ComputeProfile& prof) {
    if (!(lambda >= 0.0) || !(prof.mu > 0.0)) throw DomainError("comp_delay_fog: negative rate");
    if (prof.c < 0.0) throw DomainError("comp_delay_fog: negative compute constant");
    if (lambda >= prof.mu) throw InstabilityError(QueueKind::computation, lambda, prof.mu);
    return md1_wait(lambda, prof.mu) + 1.0 / prof.mu + prof.c * lambda;
}

/// The cloud has no computation queue, only c_c * lambda of work.
inline double comp_delay_cloud(double lambda, double c_c) {
    if (!(lambda >= 0.0)) throw DomainError("comp_delay_cloud: negative rate");
    if (c_c < 0.0) throw DomainError("comp_delay_cloud: negative compute constant");
    return c_c * lambda;
}

enum class PathKind { local, fog, cloud };

inline const char* to_string(PathKind k) {
    switch (k) {
    case PathKind::local: return "local";
    case PathKind::fog: return "fog";
    case PathKind::cloud: return "cloud";
    }
    return "?";
}

/// One computation path out of the initiating node.
///
/// local: computation queue only (prof).
/// fog:   transmission queue (mu_tx) followed by the neighbor's computation queue (prof).
/// cloud: transmission queue (mu_tx) followed by c * lambda; prof.mu is unused.
struct Path {
    PathKind kind = PathKind::local;
    double mu_tx = std::numeric_limits<double>::infinity();
    ComputeProfile prof;

    static Path local(ComputeProfile p) { return {PathKind::local, std::numeric_limits<double>::infinity(), p}; }
    static Path fog(double mu_tx, ComputeProfile p) { return {PathKind::fog, mu_tx, p}; }
    static Path cloud(double mu_c, double c_c) {
        return {PathKind::cloud, mu_c, {std::numeric_limits<double>::infinity(), c_c}};
    }
};

/// Largest arrival rate the path can take before some queue on it saturates.
inline double stability_cap(const Path& p) {
    switch (p.kind) {
    case PathKind::local: return p.prof.mu;
    case PathKind::fog: return std::min(p.mu_tx, p.prof.mu);
    case PathKind::cloud: return p.mu_tx;
    }
    return 0.0;
}

/// Same cap reduced by the stability margin.
inline double usable_cap(const Path& p, double margin = kStabilityMargin) {
    return (1.0 - margin) * stability_cap(p);
}

/// Delay in seconds of the path when it carries alpha * x_i packets/s.
///
/// Each queue traversed must satisfy lambda <= (1 - margin) * mu; otherwise an
/// InstabilityError naming the saturated queue is thrown.
inline double path_delay(const Path& p, double alpha, double x_i, double margin = kStabilityMargin) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("path_delay: alpha outside [0,1]");
    if (!(x_i >= 0.0)) throw DomainError("path_delay: negative input rate");
    const double lambda = alpha * x_i;
    const auto check = [&](QueueKind q, double mu) {
        if (lambda > (1.0 - margin) * mu) throw InstabilityError(q, lambda, mu);
    };
    switch (p.kind) {
    case PathKind::local:
        check(QueueKind::computation, p.prof.mu);
        return comp_delay_fog(lambda, p.prof);
    case PathKind::fog:
        check(QueueKind::transmission, p.mu_tx);
        check(QueueKind::computation, p.prof.mu);
        return tx_delay(lambda, p.mu_tx) + comp_delay_fog(lambda, p.prof);
    case PathKind::cloud:
        check(QueueKind::transmission, p.mu_tx);
        return tx_delay(lambda, p.mu_tx) + comp_delay_cloud(lambda, p.prof.c);
    }
    return 0.0;
}

/// Delay of the path at arrival rate lambda (packets/s); same checks as path_delay.
inline double path_delay_at_rate(const Path& p, double lambda, double margin = kStabilityMargin) {
    if (lambda == 0.0) return path_delay(p, 0.0, 0.0, margin);
    return path_delay(p, 1.0, lambda, margin);
}

/// Delay with nothing routed onto the path.
inline double zero_load_delay(const Path& p) { return path_delay(p, 0.0, 0.0); }

} // namespace fogform
