#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fogform {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative rate, d <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

enum class QueueKind { transmission, computation };

inline const char* to_string(QueueKind k) {
    return k == QueueKind::transmission ? "transmission" : "computation";
}

/// A queue was offered an arrival rate at or beyond its stability limit.
class InstabilityError : public Error {
public:
    InstabilityError(QueueKind queue, double lambda, double mu)
        : Error(std::string(to_string(queue)) + " queue unstable: lambda=" + std::to_string(lambda) +
                " >= stability limit of mu=" + std::to_string(mu)),
          queue_(queue), lambda_(lambda), mu_(mu) {}

    QueueKind queue() const noexcept { return queue_; }
    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }

private:
    QueueKind queue_;
    double lambda_;
    double mu_;
};

/// The input rate exceeds what all paths together can absorb.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double x_i, std::vector<double> path_caps)
        : Error(what), x_i_(x_i), caps_(std::move(path_caps)) {}

    double input_rate() const noexcept { return x_i_; }
    /// Per-path stability caps in packets/s, ordered local, cloud, neighbors.
    const std::vector<double>& path_caps() const noexcept { return caps_; }
    double shortfall() const noexcept {
        double total = 0.0;
        for (double c : caps_) total += c;
        return x_i_ - total;
    }

private:
    double x_i_;
    std::vector<double> caps_;
};

/// Malformed or out-of-range configuration value.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace fogform
