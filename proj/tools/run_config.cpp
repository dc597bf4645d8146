#include "run_config.hpp"

#include "dvac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace dvac::cli {

using nlohmann::json;

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "L",       "m",        "q",         "w",        "T",          "band",
        "stepper", "dt",       "rel_tol",   "abs_tol",  "norm_bound", "edge_margin",
        "r_sum",   "r_list",   "r_max",     "mode",     "lambda",     "r",
        "q_list",  "z_points", "t_min",     "t_max",    "t_points",   "trace_every",
        "format",  "output",   "verbosity"};
    return keys;
}

std::string to_string(Format f) {
    switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Both: return "both";
    }
    return "csv";
}

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    if (name == "both") return Format::Both;
    throw ConfigError("unknown format '" + name + "' (expected csv, json or both)");
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

} // namespace

bool apply_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
    const auto& keys = known_keys();
    for (const auto& [key, value] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (value.is_object()) throw ConfigError("config key '" + key + "' must not be nested");
    }
    take(j, "L", cfg.physical.L);
    take(j, "m", cfg.physical.m);
    take(j, "q", cfg.physical.q);
    take(j, "w", cfg.physical.w);
    take(j, "T", cfg.grid.T);
    take(j, "band", cfg.band);
    if (j.contains("stepper")) {
        std::string s;
        take(j, "stepper", s);
        cfg.grid.stepper = stepper_from_string(s);
    }
    take(j, "dt", cfg.grid.dt);
    take(j, "rel_tol", cfg.grid.rel_tol);
    take(j, "abs_tol", cfg.grid.abs_tol);
    take(j, "norm_bound", cfg.grid.norm_bound);
    take(j, "edge_margin", cfg.grid.edge_margin);
    take(j, "r_sum", cfg.r_sum);
    take(j, "r_list", cfg.r_list);
    take(j, "r_max", cfg.r_max);
    take(j, "mode", cfg.mode);
    take(j, "lambda", cfg.lambda);
    take(j, "r", cfg.r);
    take(j, "q_list", cfg.q_list);
    take(j, "z_points", cfg.z_points);
    take(j, "t_min", cfg.t_min);
    take(j, "t_max", cfg.t_max);
    take(j, "t_points", cfg.t_points);
    take(j, "trace_every", cfg.trace_every);
    if (j.contains("format")) {
        std::string s;
        take(j, "format", s);
        cfg.output.format = format_from_string(s);
    }
    take(j, "output", cfg.output.path);
    take(j, "verbosity", cfg.output.verbosity);
    return j.contains("T");
}

json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

json to_json(const RunConfig& cfg) {
    return json{{"L", cfg.physical.L},
                {"m", cfg.physical.m},
                {"q", cfg.physical.q},
                {"w", cfg.physical.w},
                {"T", cfg.grid.T},
                {"band", cfg.band},
                {"stepper", to_string(cfg.grid.stepper)},
                {"dt", cfg.grid.dt},
                {"rel_tol", cfg.grid.rel_tol},
                {"abs_tol", cfg.grid.abs_tol},
                {"norm_bound", cfg.grid.norm_bound},
                {"edge_margin", cfg.grid.edge_margin},
                {"r_sum", cfg.r_sum},
                {"r_list", cfg.r_list},
                {"r_max", cfg.r_max},
                {"mode", cfg.mode},
                {"lambda", cfg.lambda},
                {"r", cfg.r},
                {"q_list", cfg.q_list},
                {"z_points", cfg.z_points},
                {"t_min", cfg.t_min},
                {"t_max", cfg.t_max},
                {"t_points", cfg.t_points},
                {"trace_every", cfg.trace_every},
                {"format", to_string(cfg.output.format)},
                {"output", cfg.output.path},
                {"verbosity", cfg.output.verbosity}};
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    if (!apply_json(cfg, j)) cfg.grid.T = 500.0 / cfg.physical.m;
    return cfg;
}

void RunConfig::validate() const {
    physical.validate();
    grid.validate();
    if (band < 1) throw ConfigError("band must be at least 1");
    if (r_sum < 0) throw ConfigError("r_sum must be non-negative");
    if (r_max < 0) throw ConfigError("r_max must be non-negative");
    if (r_list.empty()) throw ConfigError("r_list must not be empty");
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        if (r_list[i] < physical.w) throw ConfigError("every r_list entry must be >= w");
        if (i > 0 && r_list[i] <= r_list[i - 1]) {
            throw ConfigError("r_list must be strictly ascending");
        }
    }
    if (mode != "analytic" && mode != "numeric") {
        throw ConfigError("mode must be analytic or numeric");
    }
    if (lambda != -1 && lambda != 1) throw ConfigError("lambda must be -1 or +1");
    if (z_points < 1 || t_points < 1) throw ConfigError("sample counts must be positive");
    if (!(t_max >= t_min)) throw ConfigError("t_max must not be below t_min");
    if (trace_every < 0) throw ConfigError("trace_every must be non-negative");
    if (output.verbosity < 0) throw ConfigError("verbosity must be non-negative");
    for (double q : q_list) {
        if (!std::isfinite(q) || q == 0.0) throw ConfigError("q_list values must be nonzero");
    }
}

} // namespace dvac::cli
