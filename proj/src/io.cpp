#include "tritrack/io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <iterator>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "tritrack/errors.hpp"
#include "tritrack/riemann.hpp"

namespace tritrack {

std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& token) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\t')) --last;
    if (first != last && *first == '+') ++first; // from_chars rejects a leading +
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        // from_chars on libstdc++ accepts "inf"/"nan"; anything left over is
        // a genuine format error.
        throw ConfigError("not a number: '" + token + "'");
    }
    return value;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path dir =
        path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw ConfigError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw ConfigError("cannot rename " + tmp.string() + " -> " +
                          path.string() + ": " + ec.message());
}

namespace {

void append_step_rows(std::ostringstream& out, const StepFunction& u,
                      const StepFunction* v) {
    // Rows live on the union of breakpoints so v's own jumps survive; the
    // reader re-normalizes each column independently.
    std::vector<double> xs = u.breakpoints();
    if (v) {
        const auto& xv = v->breakpoints();
        std::vector<double> merged;
        merged.reserve(xs.size() + xv.size());
        std::set_union(xs.begin(), xs.end(), xv.begin(), xv.end(),
                       std::back_inserter(merged));
        xs = std::move(merged);
    }
    out << "-inf," << format_double(u.values()[0]);
    if (v) out << ',' << format_double(v->values()[0]);
    out << '\n';
    for (double x : xs) {
        out << format_double(x) << ',' << format_double(u(x));
        if (v) out << ',' << format_double((*v)(x));
        out << '\n';
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void write_fronts_csv(const std::filesystem::path& path,
                      const std::vector<Front>& fronts, const FluxModel& m) {
    std::ostringstream out;
    out << kCsvMagic << " fronts\n";
    out << "id,family,kind,birth_t,birth_x,death_t,speed,u_l,u_r,v_l,v_r\n";
    for (const auto& f : fronts) {
        if (f.is_trace) continue;
        out << f.uid << ',' << f.family() << ',' << wave_kind_name(f.kind)
            << ',' << format_double(f.birth_time) << ','
            << format_double(f.birth_x) << ',' << format_double(f.death_time)
            << ',' << format_double(f.speed) << ',' << format_double(f.u_l)
            << ',' << format_double(f.u_r) << ','
            << format_double(m.from_Z(f.u_l, f.Z_l)) << ','
            << format_double(m.from_Z(f.u_r, f.Z_r)) << '\n';
    }
    write_atomic(path, out.str());
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap) {
    std::ostringstream out;
    out << kCsvMagic << " snapshot t=" << format_double(snap.t) << '\n';
    out << "x,u,v\n";
    append_step_rows(out, snap.u, &snap.v);
    write_atomic(path, out.str());
}

void write_trace_csv(const std::filesystem::path& path, const CharTrace& tr) {
    std::ostringstream out;
    out << kCsvMagic << " trace\n";
    out << "t,x,Z\n";
    out << format_double(tr.t0) << ',' << format_double(tr.x0) << ','
        << format_double(tr.Z0) << '\n';
    for (const auto& c : tr.crossings)
        out << format_double(c.t) << ',' << format_double(c.x) << ','
            << format_double(c.Z_after) << '\n';
    out << format_double(tr.terminal_t) << ',' << format_double(tr.terminal_x)
        << ',' << format_double(tr.terminal_Z) << '\n';
    write_atomic(path, out.str());
}

void write_stats_csv(const std::filesystem::path& path,
                     const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    out << kCsvMagic << " stats\n";
    out << "t,tvs_1,tvs_1_2,tvs_1_3,mass_u,mass_v,max_abs_Z\n";
    for (const auto& r : rows)
        out << format_double(r.t) << ',' << format_double(r.tvs_1) << ','
            << format_double(r.tvs_1_2) << ',' << format_double(r.tvs_1_3)
            << ',' << format_double(r.mass_u) << ',' << format_double(r.mass_v)
            << ',' << format_double(r.max_abs_Z) << '\n';
    write_atomic(path, out.str());
}

void write_step_function_csv(const std::filesystem::path& path,
                             const StepFunction& u, const StepFunction* v) {
    std::ostringstream out;
    out << kCsvMagic << " data\n";
    out << (v ? "x,u,v\n" : "x,u\n");
    append_step_rows(out, u, v);
    write_atomic(path, out.str());
}

std::pair<StepFunction, std::optional<StepFunction>>
read_step_function_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open data file: " + path.string());

    std::string line;
    if (!std::getline(in, line) ||
        line.rfind(kCsvMagic, 0) != 0)
        throw ConfigError(path.string() + ": missing '" +
                          std::string(kCsvMagic) + "' header");
    if (!std::getline(in, line))
        throw ConfigError(path.string() + ": missing column header");
    const auto cols = split_csv_line(line);
    bool has_v = false;
    if (cols.size() == 3 && cols[0] == "x" && cols[1] == "u" && cols[2] == "v")
        has_v = true;
    else if (!(cols.size() == 2 && cols[0] == "x" && cols[1] == "u"))
        throw ConfigError(path.string() + ": expected columns x,u or x,u,v");

    std::vector<double> xs, us, vvs;
    bool first_row = true;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv_line(line);
        if (f.size() != (has_v ? 3u : 2u))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": wrong field count");
        double x;
        if (first_row) {
            if (f[0] != "-inf") {
                // A plain leading breakpoint is accepted: the function is
                // extended to the left by its first value.
                x = parse_double(f[0]);
                xs.push_back(x);
            }
            us.push_back(parse_double(f[1]));
            if (has_v) vvs.push_back(parse_double(f[2]));
            if (f[0] != "-inf") {
                us.push_back(us.back());
                if (has_v) vvs.push_back(vvs.back());
            }
            first_row = false;
            continue;
        }
        x = parse_double(f[0]);
        if (!xs.empty() && !(x > xs.back()))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": breakpoints must increase");
        xs.push_back(x);
        us.push_back(parse_double(f[1]));
        if (has_v) vvs.push_back(parse_double(f[2]));
    }
    if (first_row) throw ConfigError(path.string() + ": no data rows");

    std::optional<StepFunction> v;
    if (has_v) v = StepFunction::from_raw(xs, std::move(vvs));
    StepFunction u = StepFunction::from_raw(std::move(xs), std::move(us));
    return {std::move(u), std::move(v)};
}

} // namespace tritrack
