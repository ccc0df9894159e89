#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tritrack/analysis.hpp"
#include "tritrack/flux_model.hpp"
#include "tritrack/step_function.hpp"
#include "tritrack/wft.hpp"

namespace tritrack {

/// Shortest decimal string that round-trips the value exactly.
std::string format_double(double v);

/// Parses a double or throws ConfigError naming the offending token.
double parse_double(const std::string& token);

/// Writes content to path atomically (temp file in the same directory, then
/// rename). Creates parent directories as needed.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// All CSV files open with the line `# tritrack-v1 <kind>` followed by a
/// column header. Step functions are serialized one region per row: the first
/// row carries x = -inf and the leftmost value; every later row carries a
/// breakpoint and the value taken to its right.
inline constexpr const char* kCsvMagic = "# tritrack-v1";

/// fronts.csv: id,family,kind,birth_t,birth_x,death_t,speed,u_l,u_r,v_l,v_r.
/// v states are recovered from Z through the model.
void write_fronts_csv(const std::filesystem::path& path,
                      const std::vector<Front>& fronts, const FluxModel& m);

/// snapshot CSV: x,u,v (step-function region rows as described above).
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap);

/// trace CSV: t,x,Z; the seed row, one row per crossing (Z just left of the
/// crossed front), and the terminal row.
void write_trace_csv(const std::filesystem::path& path, const CharTrace& tr);

struct StatsRow {
    double t = 0.0;
    double tvs_1 = 0.0;     ///< classical total variation
    double tvs_1_2 = 0.0;   ///< TV^{1/2} sum
    double tvs_1_3 = 0.0;   ///< TV^{1/3} sum
    double mass_u = 0.0;
    double mass_v = 0.0;
    double max_abs_Z = 0.0;
};

/// stats.csv: t,tvs_1,tvs_1_2,tvs_1_3,mass_u,mass_v,max_abs_Z.
void write_stats_csv(const std::filesystem::path& path,
                     const std::vector<StatsRow>& rows);

/// Step-function data file: x,u or x,u,v region rows.
void write_step_function_csv(const std::filesystem::path& path,
                             const StepFunction& u,
                             const StepFunction* v = nullptr);

/// Reads a step-function CSV written by write_step_function_csv (or produced
/// by hand in the same shape). Returns u and, when the file has a v column,
/// v. Throws ConfigError on malformed input.
std::pair<StepFunction, std::optional<StepFunction>>
read_step_function_csv(const std::filesystem::path& path);

} // namespace tritrack
