#pragma once

#include "run_config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dvac::cli {

/// CLI exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_invariant = 4,
};

/// What a subcommand produces before it is wrapped and written.
struct Payload {
    std::string csv;                       ///< header row + data rows
    nlohmann::json data;                   ///< module-specific report
    std::optional<std::string> trace_csv;  ///< shift time series, when requested
};

[[nodiscard]] Payload cmd_spectrum(const RunConfig& cfg);
[[nodiscard]] Payload cmd_potential(const RunConfig& cfg);
[[nodiscard]] Payload cmd_perturb(const RunConfig& cfg);
[[nodiscard]] Payload cmd_shift(const RunConfig& cfg);
[[nodiscard]] Payload cmd_vacuum(const RunConfig& cfg);
[[nodiscard]] Payload cmd_sweep_q(const RunConfig& cfg);

struct CheckOutcome {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckOutcome> outcomes;
    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] std::string table() const;
    [[nodiscard]] Payload payload() const;
};

/// The invariant suite. Any exception inside a check marks that check failed.
[[nodiscard]] CheckReport cmd_check(const RunConfig& cfg);

/// 17 significant digits, round-trip exact for doubles.
[[nodiscard]] std::string format_double(double x);

/// CSV file text: a "# <tool> <version> config: {...}" line followed by the payload CSV.
[[nodiscard]] std::string render_csv(const RunConfig& cfg, const std::string& csv);

/// ReportEnvelope: tool, version, timestamp, resolved config and payload.
[[nodiscard]] nlohmann::json envelope(const RunConfig& cfg, const std::string& command,
                                      const Payload& payload);

/// Writes per cfg.output: stdout for "-", else <stem>.csv / <stem>.json / <stem>.trace.csv.
void emit(const RunConfig& cfg, const std::string& command, const Payload& payload,
          std::ostream& out);

} // namespace dvac::cli
