#pragma once

#include "dvac/evolution.hpp"
#include "dvac/params.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dvac::cli {

inline constexpr const char* tool_name = "dvac";
inline constexpr const char* tool_version = "0.1.0";

enum class Format { Csv, Json, Both };

struct OutputOptions {
    Format format = Format::Csv;
    std::string path = "-"; ///< "-" is stdout, otherwise a stem for <stem>.csv / <stem>.json
    int verbosity = 0;
};

/// Everything a subcommand needs. The file format is one flat JSON object whose keys
/// are listed in known_keys(); unknown keys are rejected.
struct RunConfig {
    PhysicalParams physical;
    TimeGrid grid;         ///< grid.T defaults to 500 / m when not given
    int band = 3;
    int r_sum = 5;
    std::vector<int> r_list = {10, 25, 50, 100, 200};
    int r_max = 10;
    std::string mode = "analytic";
    int lambda = -1;
    int r = 0;
    std::vector<double> q_list = {0.0025, 0.005, 0.01, 0.02};
    int z_points = 65;
    double t_min = -10.0;
    double t_max = 10.0;
    int t_points = 201;
    int trace_every = 0; ///< 0 disables the shift time series
    OutputOptions output;

    /// Re-validates every module invariant; throws ConfigError.
    void validate() const;
};

[[nodiscard]] const std::vector<std::string>& known_keys();

/// Applies the keys of a flat JSON object on top of cfg. Returns whether "T" was set.
bool apply_json(RunConfig& cfg, const nlohmann::json& j);

/// Parses a config file; throws ConfigError on I/O, syntax, type or unknown-key errors.
[[nodiscard]] nlohmann::json read_config_file(const std::string& path);

/// The fully resolved config as the flat JSON object read_config_file accepts.
[[nodiscard]] nlohmann::json to_json(const RunConfig& cfg);

/// Round-trip helper: defaults, then j, with T resolved from m if absent.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);

[[nodiscard]] std::string to_string(Format f);
[[nodiscard]] Format format_from_string(const std::string& name);

} // namespace dvac::cli
