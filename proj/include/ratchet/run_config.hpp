#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ratchet/experiments.hpp"
#include "ratchet/floquet.hpp"
#include "ratchet/types.hpp"

namespace ratchet {

enum class OutputFormat { Csv, Json };

/// Fully resolved run description: model parameters plus the experiment
/// selection. File values are overridden by CLI flags before execution.
struct RunConfig {
    RatchetParams params;
    std::string experiment = "evolve";  // evolve | sweep-eta | sweep-strength |
                                        // sweep-kappa | floquet-bands | reversal | find-reversal
    std::int64_t periods = 200;
    int x0_points = 256;
    std::vector<double> sweep_values;   // empty = experiment default
    double p_lo = 2.0;
    double p_hi = 3.0;
    std::string out_path;               // empty = stdout
    OutputFormat format = OutputFormat::Csv;
    bool timestamp = false;

    void validate() const;
};

/// Parse a JSON run-config document (nested sections "params", "run",
/// "output"). Unknown keys and domain violations raise ConfigError with the
/// offending field in the message.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Number rendering used in all output files: shortest text with 17
/// significant digits, locale-independent.
std::string format_double(double v);

/// Resolved-config header lines (each prefixed with "# "), identical for
/// identical configs. The optional timestamp line is appended only when
/// config.timestamp is set.
std::vector<std::string> config_header(const RunConfig& config);

void write_trajectory(std::ostream& os, const RunConfig& config,
                      const std::vector<TrajectoryRecord>& records);
void write_sweep(std::ostream& os, const RunConfig& config, const SweepResult& result);
void write_bands(std::ostream& os, const RunConfig& config, const BandSpectrum& spectrum);
void write_scalar(std::ostream& os, const RunConfig& config, const std::string& name,
                  double value);

}  // namespace ratchet
