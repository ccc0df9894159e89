#include "tritrack/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tritrack/analysis.hpp"
#include "tritrack/errors.hpp"
#include "tritrack/io.hpp"

namespace tritrack {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& key) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) {
        const std::string t = trim(tok);
        if (t.empty())
            throw ConfigError(key + ": empty entry in list '" + s + "'");
        out.push_back(parse_double(t));
    }
    return out;
}

/// "v | x:v | x:v ...": leftmost value first, then breakpoint:value pairs.
StepFunction parse_pieces(const std::string& s, const std::string& key) {
    const auto toks = split(s, '|');
    std::vector<double> xs, vs;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string t = trim(toks[i]);
        if (t.empty()) throw ConfigError(key + ": empty piece in '" + s + "'");
        const auto colon = t.find(':');
        if (i == 0) {
            if (colon != std::string::npos)
                throw ConfigError(key +
                                  ": first piece is the leftmost value, got '" +
                                  t + "'");
            vs.push_back(parse_double(t));
            continue;
        }
        if (colon == std::string::npos)
            throw ConfigError(key + ": piece '" + t + "' needs x:value");
        const double x = parse_double(trim(t.substr(0, colon)));
        if (!xs.empty() && !(x > xs.back()))
            throw ConfigError(key + ": breakpoints must increase in '" + s + "'");
        xs.push_back(x);
        vs.push_back(parse_double(trim(t.substr(colon + 1))));
    }
    return StepFunction::from_raw(std::move(xs), std::move(vs));
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + s + "'");
}

} // namespace

FluxModel RunConfig::make_model() const {
    if (model == "burgers_linear")
        return M ? FluxModel::burgers_linear(*M) : FluxModel::burgers_linear();
    if (model == "cubic_shifted")
        return M ? FluxModel::cubic_shifted(*M) : FluxModel::cubic_shifted();
    if (model == "poly") {
        if (f_coeffs.empty() || a_coeffs.empty())
            throw ConfigError("model=poly requires f_coeffs and a_coeffs");
        if (!M) throw ConfigError("model=poly requires M");
        return FluxModel::from_polynomials(Polynomial{f_coeffs},
                                           Polynomial{a_coeffs}, *M);
    }
    throw ConfigError("unknown model '" + model + "'");
}

std::pair<StepFunction, StepFunction> RunConfig::make_data() const {
    int sources = 0;
    if (blowup_N > 0) ++sources;
    if (!data_csv.empty()) ++sources;
    if (u0) ++sources;
    if (sources == 0)
        throw ConfigError("no initial data: set data=blowup:N, data=csv:<path> "
                          "or u0=...");
    if (sources > 1)
        throw ConfigError("conflicting initial data sources");

    if (blowup_N > 0) {
        const BlowupData bd = build_blowup_data(blowup_N);
        return {bd.u0, StepFunction(bd.v0)};
    }
    if (!data_csv.empty()) {
        auto [u, v] = read_step_function_csv(data_csv);
        if (v0 && v)
            throw ConfigError("v0 given inline and in the data file");
        StepFunction vv = v ? *v : (v0 ? *v0 : StepFunction(1.0));
        return {std::move(u), std::move(vv)};
    }
    return {*u0, v0 ? *v0 : StepFunction(1.0)};
}

RunConfig parse_config_string(const std::string& text,
                              const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool saw_nu = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key or value");
        try {
            if (key == "model") {
                cfg.model = val;
            } else if (key == "f_coeffs") {
                cfg.f_coeffs = parse_double_list(val, key);
            } else if (key == "a_coeffs") {
                cfg.a_coeffs = parse_double_list(val, key);
            } else if (key == "m") {
                cfg.M = parse_double(val);
            } else if (key == "nu") {
                cfg.nu = static_cast<int>(parse_double(val));
                if (cfg.nu < 1 || double(cfg.nu) != parse_double(val))
                    throw ConfigError("nu must be a positive integer");
                saw_nu = true;
            } else if (key == "data") {
                if (val.rfind("blowup:", 0) == 0) {
                    cfg.blowup_N = static_cast<int>(parse_double(val.substr(7)));
                    if (cfg.blowup_N < 1)
                        throw ConfigError("data=blowup:N needs N >= 1");
                } else if (val.rfind("csv:", 0) == 0) {
                    cfg.data_csv = trim(val.substr(4));
                    if (cfg.data_csv.empty())
                        throw ConfigError("data=csv:<path> needs a path");
                } else {
                    throw ConfigError("data must be blowup:N or csv:<path>");
                }
            } else if (key == "u0") {
                cfg.u0 = parse_pieces(val, key);
            } else if (key == "v0") {
                cfg.v0 = parse_pieces(val, key);
            } else if (key == "t") {
                cfg.T = parse_double(val);
                if (!(cfg.T >= 0.0)) throw ConfigError("T must be >= 0");
                cfg.has_T = true;
            } else if (key == "snapshots") {
                cfg.snapshots = parse_double_list(val, key);
            } else if (key == "traces") {
                cfg.traces = parse_double_list(val, key);
            } else if (key == "outdir") {
                cfg.outdir = val;
            } else if (key == "max_interactions") {
                const double d = parse_double(val);
                if (!(d >= 1.0) || d != std::floor(d) || d > 1e18)
                    throw ConfigError("max_interactions must be a positive "
                                      "integer");
                cfg.max_interactions = static_cast<std::uint64_t>(d);
            } else if (key == "exact") {
                cfg.exact = parse_bool(val, key);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " +
                              e.what());
        }
    }
    if (!saw_nu) throw ConfigError(origin + ": missing required key nu");
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str(), path.string());
}

} // namespace tritrack
