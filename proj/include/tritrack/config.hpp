#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tritrack/flux_model.hpp"
#include "tritrack/step_function.hpp"

namespace tritrack {

/// Parsed run description (snake_case key=value lines, '#' comments).
///
/// Keys:
///   model   = burgers_linear | cubic_shifted | poly
///   f_coeffs, a_coeffs  comma-separated ascending-degree coefficients (poly)
///   M       = state bound (defaults to the model's own)
///   nu      = grid refinement (required, >= 1)
///   data    = blowup:N | csv:<path>          (or give u0/v0 inline)
///   u0      = v | x:v | x:v | ...  leftmost value, then breakpoint:value
///   v0      = same syntax (default: constant 1)
///   T       = time horizon (required for solve, >= 0)
///   snapshots = comma-separated times
///   traces    = comma-separated trace origins
///   outdir    = output directory (default "out")
///   max_interactions = circuit-breaker cap (default 10^7)
///   exact     = true | false (rational event scheduling)
struct RunConfig {
    std::string model = "burgers_linear";
    std::vector<double> f_coeffs, a_coeffs;
    std::optional<double> M;
    int nu = 0;
    int blowup_N = 0;      ///< > 0 when data = blowup:N
    std::string data_csv;  ///< nonempty when data = csv:<path>
    std::optional<StepFunction> u0, v0;
    double T = 0.0;
    bool has_T = false;
    std::vector<double> snapshots;
    std::vector<double> traces;
    std::string outdir = "out";
    std::uint64_t max_interactions = 10'000'000ULL;
    bool exact = false;

    /// Builds the configured flux model. Throws ConfigError for unknown ids
    /// or missing polynomial coefficients.
    FluxModel make_model() const;

    /// Materializes (u0, v0): inline pieces, CSV file, or blow-up data; u0 is
    /// returned as given (callers sample it onto the grid). Throws
    /// ConfigError when no data source (or more than one) is configured.
    std::pair<StepFunction, StepFunction> make_data() const;
};

RunConfig parse_config_string(const std::string& text,
                              const std::string& origin = "<config>");
RunConfig parse_config_file(const std::filesystem::path& path);

} // namespace tritrack
