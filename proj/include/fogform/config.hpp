#pragma once

// JSON configuration for ScenarioConfig. Comments (// and /* */) are allowed in
// config files. Every key can be overridden with "dotted.key=value", where the
// value is parsed as JSON when possible (numbers, null, true, [1,2]) and taken as
// a string otherwise. Unknown keys are rejected.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fogform/errors.hpp"
#include "fogform/scenario.hpp"

namespace fogform {

using json = nlohmann::json;

inline json to_json(const ScenarioConfig& c) {
    json j;
    j["area_m"] = c.area_m;
    j["n_candidates"] = c.n_candidates;
    j["initiator"] = c.initiator ? json{{"x", c.initiator->x}, {"y", c.initiator->y}} : json(nullptr);
    j["bs_distance_m"] = c.bs_distance_m;
    j["radio"] = {{"bandwidth_hz", c.radio.bandwidth_hz},
                  {"noise_psd_dbm_per_hz", c.radio.noise_psd_dbm_per_hz},
                  {"tx_power_dbm", c.radio.tx_power_dbm},
                  {"pathloss_const", c.radio.pathloss_const},
                  {"pathloss_exp", c.radio.pathloss_exp},
                  {"packet_size_bytes", c.radio.packet_size_bytes}};
    j["local"] = {{"mu", c.local_prof.mu}, {"c", c.local_prof.c}};
    j["neighbor"] = {{"mu", c.neighbor_prof.mu}, {"c", c.neighbor_prof.c}};
    j["neighbor_mu_tx"] = c.neighbor_mu_tx ? json(*c.neighbor_mu_tx) : json(nullptr);
    j["cloud"] = {{"mu_c", c.mu_c ? json(*c.mu_c) : json(nullptr)}, {"c_c", c.c_c}};
    j["x_i"] = c.x_i;
    j["eta"] = c.eta;
    j["tau"] = c.tau;
    j["J"] = c.J;
    j["seed"] = c.seed;
    j["iterations"] = c.iterations;
    j["fill_at_stream_end"] = c.fill_at_stream_end;
    j["j_min"] = c.j_min;
    j["j_max"] = c.j_max;
    j["mu_ij_values"] = c.mu_ij_values;
    j["distances_m"] = c.distances_m;
    return j;
}

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path, "missing");
    return j.at(key);
}

inline double num(const json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

inline int integer(const json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

inline std::optional<double> opt_num(const json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) throw ConfigError(path, "expected a number or null");
    return v.get<double>();
}

inline std::vector<double> num_list(const json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_array()) throw ConfigError(path, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(path, "expected a list of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

/// Copies `src` onto `dst`, recursing into objects. Keys absent from `dst` are errors.
inline void merge_known(json& dst, const json& src, const std::string& prefix) {
    if (!src.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (auto it = src.begin(); it != src.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!dst.contains(it.key())) throw ConfigError(path, "unknown key");
        json& slot = dst[it.key()];
        if (slot.is_object() && it.value().is_object())
            merge_known(slot, it.value(), path);
        else
            slot = it.value();
    }
}

} // namespace detail

inline ScenarioConfig from_json(const json& j) {
    using namespace detail;
    ScenarioConfig c;
    c.area_m = num(j, "area_m", "area_m");
    c.n_candidates = integer(j, "n_candidates", "n_candidates");
    const auto& ini = field(j, "initiator", "initiator");
    if (!ini.is_null()) c.initiator = Position{num(ini, "x", "initiator.x"), num(ini, "y", "initiator.y")};
    c.bs_distance_m = num(j, "bs_distance_m", "bs_distance_m");
    const auto& r = field(j, "radio", "radio");
    c.radio.bandwidth_hz = num(r, "bandwidth_hz", "radio.bandwidth_hz");
    c.radio.noise_psd_dbm_per_hz = num(r, "noise_psd_dbm_per_hz", "radio.noise_psd_dbm_per_hz");
    c.radio.tx_power_dbm = num(r, "tx_power_dbm", "radio.tx_power_dbm");
    c.radio.pathloss_const = num(r, "pathloss_const", "radio.pathloss_const");
    c.radio.pathloss_exp = num(r, "pathloss_exp", "radio.pathloss_exp");
    c.radio.packet_size_bytes = num(r, "packet_size_bytes", "radio.packet_size_bytes");
    const auto& lp = field(j, "local", "local");
    c.local_prof = {num(lp, "mu", "local.mu"), num(lp, "c", "local.c")};
    const auto& np = field(j, "neighbor", "neighbor");
    c.neighbor_prof = {num(np, "mu", "neighbor.mu"), num(np, "c", "neighbor.c")};
    c.neighbor_mu_tx = opt_num(j, "neighbor_mu_tx", "neighbor_mu_tx");
    const auto& cl = field(j, "cloud", "cloud");
    c.mu_c = opt_num(cl, "mu_c", "cloud.mu_c");
    c.c_c = num(cl, "c_c", "cloud.c_c");
    c.x_i = num(j, "x_i", "x_i");
    c.eta = num(j, "eta", "eta");
    c.tau = integer(j, "tau", "tau");
    c.J = integer(j, "J", "J");
    const auto& seed = field(j, "seed", "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        throw ConfigError("seed", "expected a non-negative integer");
    c.seed = seed.get<std::uint64_t>();
    c.iterations = integer(j, "iterations", "iterations");
    const auto& fill = field(j, "fill_at_stream_end", "fill_at_stream_end");
    if (!fill.is_boolean()) throw ConfigError("fill_at_stream_end", "expected true or false");
    c.fill_at_stream_end = fill.get<bool>();
    c.j_min = integer(j, "j_min", "j_min");
    c.j_max = integer(j, "j_max", "j_max");
    c.mu_ij_values = num_list(j, "mu_ij_values", "mu_ij_values");
    c.distances_m = num_list(j, "distances_m", "distances_m");
    validate(c);
    return c;
}

/// Applies one "dotted.key=value" override to a config document.
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::string walked;
    std::string::size_type start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        // "initiator" is null until one of its coordinates is set.
        if (node->is_null() && walked == "initiator") *node = json::object();
        const bool initiator_coord = walked == "initiator" && (part == "x" || part == "y");
        if (!node->is_object() || (!node->contains(part) && !initiator_coord))
            throw ConfigError(key, "unknown key");
        walked += walked.empty() ? part : "." + part;
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

/// Parses a config document; a run manifest is accepted too (its "config" snapshot is used).
inline json parse_config_text(const std::string& text, const std::string& origin) {
    json doc = json::parse(text, nullptr, false, /*ignore_comments=*/true);
    if (doc.is_discarded()) throw ConfigError(origin, "not valid JSON");
    if (doc.is_object() && doc.contains("manifest_version") && doc.contains("config")) return doc["config"];
    return doc;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Defaults, then the file (if any), then overrides in order.
inline json build_config_doc(const std::string* path, const std::vector<std::string>& overrides) {
    json doc = to_json(ScenarioConfig{});
    if (path) detail::merge_known(doc, parse_config_text(read_file(*path), *path), "");
    for (const auto& o : overrides) apply_override(doc, o);
    return doc;
}

inline ScenarioConfig load_config(const std::string* path, const std::vector<std::string>& overrides) {
    return from_json(build_config_doc(path, overrides));
}

} // namespace fogform
