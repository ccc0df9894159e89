#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tritrack/analysis.hpp"
#include "tritrack/config.hpp"
#include "tritrack/errors.hpp"
#include "tritrack/grid.hpp"
#include "tritrack/io.hpp"
#include "tritrack/riemann.hpp"
#include "tritrack/wft.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tritrack;

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing

int env_threads() {
    const char* raw = std::getenv("TRITRACK_THREADS");
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (!raw) return static_cast<int>(hw);
    try {
        const int n = std::stoi(raw);
        if (n < 1) throw std::invalid_argument("TRITRACK_THREADS");
        return std::min<int>(n, static_cast<int>(hw));
    } catch (const std::exception&) {
        throw ConfigError("TRITRACK_THREADS must be a positive integer");
    }
}

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

Check make_check(std::string name, double value, double target,
                 double tolerance, std::string note = "") {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.target = target;
    c.tolerance = tolerance;
    c.pass = std::isfinite(value) && std::abs(value - target) <= tolerance;
    c.note = std::move(note);
    return c;
}

Check make_bound_check(std::string name, double value, double bound,
                       bool below, std::string note = "") {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.target = bound;
    c.tolerance = 0.0;
    c.pass = std::isfinite(value) && (below ? value <= bound : value >= bound);
    c.note = std::move(note);
    if (c.note.empty()) c.note = below ? "value <= target" : "value >= target";
    return c;
}

StatsRow make_stats_row(const Snapshot& snap, double u_ref, double v_ref) {
    StatsRow row;
    row.t = snap.t;
    row.tvs_1 = tvs(snap.u, 1.0).tv;
    row.tvs_1_2 = tvs(snap.u, 0.5).tv;
    row.tvs_1_3 = tvs(snap.u, 1.0 / 3.0).tv;
    row.mass_u = snap.u.mass_relative(u_ref);
    row.mass_v = snap.v.mass_relative(v_ref);
    row.max_abs_Z = snap.Z.inf_norm();
    return row;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& config_path, const std::string& outdir_flag) {
    RunConfig cfg = parse_config_file(config_path);
    if (!outdir_flag.empty()) cfg.outdir = outdir_flag;
    if (!cfg.has_T) throw ConfigError("solve requires T in the config");

    const FluxModel model = cfg.make_model();
    auto [u0_raw, v0] = cfg.make_data();
    const StepFunction u0 = sample_to_grid(u0_raw, cfg.nu);

    SimOptions opts;
    opts.retain_log = true;
    opts.exact_mode = cfg.exact;
    opts.max_interactions = cfg.max_interactions;
    Simulation sim(model, cfg.nu, u0, v0, opts);

    const fs::path out(cfg.outdir);
    const double u_ref = u0.values().front();
    const double v_ref = v0.values().front();

    std::vector<double> snap_times = cfg.snapshots;
    std::sort(snap_times.begin(), snap_times.end());
    snap_times.erase(std::unique(snap_times.begin(), snap_times.end()),
                     snap_times.end());
    for (double t : snap_times)
        if (t < 0.0 || t > cfg.T)
            throw ConfigError("snapshot time " + format_double(t) +
                              " outside [0, T]");

    std::vector<StatsRow> stats_rows;
    stats_rows.push_back(make_stats_row(sim.snapshot(0.0), u_ref, v_ref));

    for (double t : snap_times) {
        sim.run_until(t);
        const Snapshot snap = sim.snapshot(t);
        write_snapshot_csv(out / ("snapshot_" + format_double(t) + ".csv"),
                           snap);
        if (t > 0.0) stats_rows.push_back(make_stats_row(snap, u_ref, v_ref));
    }
    sim.run_until(cfg.T);
    if (stats_rows.back().t != cfg.T)
        stats_rows.push_back(make_stats_row(sim.snapshot(cfg.T), u_ref, v_ref));

    write_fronts_csv(out / "fronts.csv", sim.all_fronts(), model);
    write_stats_csv(out / "stats.csv", stats_rows);
    for (double x0 : cfg.traces) {
        const CharTrace tr = sim.replay_trace(x0, cfg.T);
        write_trace_csv(out / ("trace_" + format_double(x0) + ".csv"), tr);
    }

    const SimStats st = sim.stats();
    std::cout << "solve: t=" << format_double(st.clock)
              << " interactions=" << st.interactions
              << " fronts_created=" << st.fronts_created
              << " alive=" << st.alive
              << " max|Z|=" << format_double(st.max_abs_Z) << '\n'
              << "outputs in " << out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// riemann

int cmd_riemann(const std::string& model_id, double M_flag, bool has_M, int nu,
                double ul, double vl, double ur, double vr,
                const std::string& csv) {
    FluxModel m;
    if (model_id == "burgers_linear")
        m = has_M ? FluxModel::burgers_linear(M_flag)
                  : FluxModel::burgers_linear();
    else if (model_id == "cubic_shifted")
        m = has_M ? FluxModel::cubic_shifted(M_flag)
                  : FluxModel::cubic_shifted();
    else
        throw ConfigError("unknown model '" + model_id + "'");

    const GridFlux g = build_grid_flux(m, nu);
    const WaveFan fan =
        system_riemann(m, g, ul, m.to_Z(ul, vl), ur, m.to_Z(ur, vr));

    std::cout << "riemann: model=" << m.name << " nu=" << nu << " ("
              << format_double(ul) << "," << format_double(vl) << ") / ("
              << format_double(ur) << "," << format_double(vr) << ") -> "
              << fan.waves.size() << " wave(s)\n";
    std::ostringstream csv_out;
    csv_out << kCsvMagic << " riemann\n";
    csv_out << "kind,speed,u_l,u_r,v_l,v_r,Z_l,Z_r\n";
    for (const auto& w : fan.waves) {
        const double wvl = m.from_Z(w.u_l, w.Z_l);
        const double wvr = m.from_Z(w.u_r, w.Z_r);
        std::cout << "  " << wave_kind_name(w.kind)
                  << "  speed=" << format_double(w.speed) << "  u: "
                  << format_double(w.u_l) << " -> " << format_double(w.u_r)
                  << "  v: " << format_double(wvl) << " -> "
                  << format_double(wvr) << '\n';
        csv_out << wave_kind_name(w.kind) << ',' << format_double(w.speed)
                << ',' << format_double(w.u_l) << ',' << format_double(w.u_r)
                << ',' << format_double(wvl) << ',' << format_double(wvr)
                << ',' << format_double(w.Z_l) << ',' << format_double(w.Z_r)
                << '\n';
    }
    if (!csv.empty()) write_atomic(csv, csv_out.str());
    return 0;
}

// ---------------------------------------------------------------------------
// blowup

int cmd_blowup(int blocks, int nu, double trace_from, const std::string& outdir,
               std::uint64_t cap) {
    const CrosscheckReport rep =
        blowup_wft_crosscheck(blocks, nu, cap, trace_from);
    const fs::path out(outdir);

    write_trace_csv(out / ("trace_" + format_double(rep.x0) + ".csv"),
                    rep.trace);
    write_step_function_csv(out / "data.csv", build_blowup_data(blocks).u0);

    const RatioProduct exact_product = blowup_ratio_product(blocks);
    json j;
    j["format"] = "tritrack-v1";
    j["experiment"] = "blowup";
    j["blocks"] = rep.N;
    j["nu"] = rep.nu;
    j["trace_from"] = rep.x0;
    j["origin_shifts"] = rep.shifts;
    j["b_rounded"] = rep.b_rounded;
    j["expected_fronts"] = rep.expected_fronts;
    j["crossings"] = rep.crossings;
    j["shock_crossings"] = rep.shock_crossings;
    j["contact_crossings"] = rep.contact_crossings;
    j["interactions"] = rep.interactions;
    j["clock"] = rep.clock;
    j["trace_Z"] = rep.trace_Z;
    j["oracle_Z"] = rep.oracle_Z;
    j["analytic_Z"] = rep.analytic_Z;
    j["rel_trace_oracle"] = rep.rel_trace_oracle;
    j["rel_oracle_analytic"] = rep.rel_oracle_analytic;
    j["unrounded_Z"] = exact_product.Z_left;
    j["unrounded_log_Z"] = exact_product.log_Z;
    write_atomic(out / "blowup_summary.json", j.dump(2) + "\n");

    std::cout << "blowup: N=" << rep.N << " nu=" << rep.nu << " trace from x0="
              << format_double(rep.x0) << " (shifted " << rep.shifts
              << " cells)\n"
              << "  crossings=" << rep.crossings << " (" << rep.shock_crossings
              << " shocks, " << rep.contact_crossings << " contacts) over "
              << rep.interactions << " interactions\n"
              << "  terminal Z=" << format_double(rep.trace_Z)
              << "  product oracle=" << format_double(rep.oracle_Z)
              << "  rel err=" << format_double(rep.rel_trace_oracle) << '\n'
              << "  shock-only product=" << format_double(rep.analytic_Z)
              << "  rel gap=" << format_double(rep.rel_oracle_analytic) << '\n'
              << "outputs in " << out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// verify suites

std::vector<Check> suite_cubic(const fs::path& out) {
    std::vector<Check> checks;
    const FluxModel burgers = FluxModel::burgers_linear();
    const FluxModel cubic = FluxModel::cubic_shifted();

    const FitReport rb = cubic_flatness_scan(burgers, 60);
    checks.push_back(make_check("cubic_flatness_exponent_burgers",
                                rb.fitted_exponent, rb.target, rb.tolerance));
    checks.push_back(make_check("cubic_flatness_constant_burgers",
                                rb.fitted_constant, 2.0 / 3.0,
                                0.02 * (2.0 / 3.0)));
    const FitReport rc = cubic_flatness_scan(cubic, 60);
    checks.push_back(make_check("cubic_flatness_exponent_cubic_shifted",
                                rc.fitted_exponent, rc.target, rc.tolerance));
    checks.push_back(make_bound_check("cubic_flatness_max_ratio_burgers",
                                      rb.aux, 1.0, true,
                                      "max |r-1|/|[u]|^3 over the state square"));

    // Composite-fan constant, stable in the grid refinement.
    std::vector<double> Cs;
    for (int nu : {50, 100, 200}) {
        const GridFlux g = build_grid_flux(cubic, nu);
        Cs.push_back(
            composite_variation_check(cubic, g, -0.4, 0.5, 1.0).fitted_constant);
    }
    const double cmax = *std::max_element(Cs.begin(), Cs.end());
    const double cmin = *std::min_element(Cs.begin(), Cs.end());
    const double spread = (cmax - cmin) / (0.5 * (cmax + cmin));
    checks.push_back(make_bound_check(
        "composite_variation_stability", spread, 0.10, true,
        "relative spread of fitted C over nu in {50,100,200}"));

    // Burgers +-0.3 shock: TV of Z equals |r - 1| exactly, and the ratio has
    // the closed form r = (1+b)/(1-b) * exp(-2b) at b = 0.3, so the target is
    // the double nearest (13/7) * exp(-3/5) - 1.
    const GridFlux g50 = build_grid_flux(burgers, 50);
    const FitReport cv = composite_variation_check(burgers, g50, 0.3, -0.3, 1.0);
    checks.push_back(make_check("composite_variation_burgers_tv", cv.aux,
                                0.01922160988890623, 1e-9,
                                "TV(Z) across the +-0.3 shock, |Z+| = 1"));

    // Sample CSV for external plotting.
    std::ostringstream csv;
    csv << kCsvMagic << " cubic_flatness\n";
    csv << "model,b,abs_r_minus_1\n";
    for (const FluxModel* m : {&burgers, &cubic}) {
        for (int i = 0; i < 25; ++i) {
            const double b =
                1e-3 * std::pow(100.0, double(i) / 24.0);
            csv << m->name << ',' << format_double(b) << ','
                << format_double(std::abs(rh_factor(*m, b, -b) - 1.0)) << '\n';
        }
    }
    write_atomic(out / "cubic_flatness_samples.csv", csv.str());
    return checks;
}

std::vector<Check> suite_blowup(const fs::path& out, int blocks, int nu,
                                std::uint64_t cap) {
    std::vector<Check> checks;

    const BlowupData bd = build_blowup_data(blocks);
    checks.push_back(make_bound_check(
        "blowup_data_min_gap", bd.min_gap, 0.0, false,
        "min T_n - (1 - x_n): trace clears block n before it self-interacts"));
    checks.push_back(make_check("blowup_data_inf_norm", bd.u0.inf_norm(),
                                bd.b[0], 1e-15, "sup |u0| = b_1"));
    checks.push_back(make_check(
        "blowup_data_jumps",
        double(bd.u0.values().size()), double(2 * blocks + 2), 0.0,
        "2N+2 region values"));

    const RatioProduct p1 = blowup_ratio_product(1);
    checks.push_back(make_check("blowup_ratio_product_N1", p1.Z_left,
                                2.0 * std::exp(-2.0 / 3.0), 1e-15,
                                "(1+b)/(1-b) e^{-2b} at b = 1/3"));

    const FitReport growth = blowup_growth_fit({1000, 10000, 100000, 1000000});
    checks.push_back(make_check("blowup_growth_slope", growth.fitted_exponent,
                                growth.target, growth.tolerance,
                                "log Z vs ln(N+26)"));
    checks.push_back(make_check("blowup_growth_monotone", growth.aux, 1.0, 0.0,
                                "every factor exceeds 1"));

    // BV^s dichotomy at the sequence level.
    double harmonic = 0.0;
    for (int n = 1; n <= 100000; ++n) harmonic += 1.0 / (double(n) + 26.0);
    const double p3 = bvs_partial_sums(100000, 3.0);
    checks.push_back(make_check("bvs_p3_identity", p3, 8.0 * harmonic,
                                1e-10 * p3, "sum (2b_n)^3 = 8 sum 1/(n+26)"));
    const double r2 = bvs_partial_sums(100, 3.0) / (8.0 * std::log(100.0));
    const double r4 = bvs_partial_sums(10000, 3.0) / (8.0 * std::log(10000.0));
    const double r6 =
        bvs_partial_sums(1000000, 3.0) / (8.0 * std::log(1000000.0));
    checks.push_back(make_bound_check(
        "bvs_p3_ratio_monotone", (r4 - r2) + (r6 - r4), 0.0, false,
        "ratio to 8 ln N increases toward 1 (r: " + format_double(r2) + ", " +
            format_double(r4) + ", " + format_double(r6) + ")"));
    const double tail = bvs_partial_sums(100000, 4.0) - bvs_partial_sums(1000, 4.0);
    checks.push_back(make_bound_check(
        "bvs_p4_tail", tail, 48.0 * std::pow(1026.0, -1.0 / 3.0), true,
        "tail past N=1000 under the integral bound 48 (N+26)^{-1/3}"));

    std::ostringstream growth_csv;
    growth_csv << kCsvMagic << " blowup_growth\n";
    growth_csv << "N,ln_N_plus_26,log_Z\n";
    for (int N : {1000, 10000, 100000, 1000000}) {
        const RatioProduct p = blowup_ratio_product(N);
        growth_csv << N << ',' << format_double(std::log(double(N) + 26.0))
                   << ',' << format_double(p.log_Z) << '\n';
    }
    write_atomic(out / "blowup_growth.csv", growth_csv.str());

    if (blocks <= 12) {
        const CrosscheckReport rep = blowup_wft_crosscheck(blocks, nu, cap);
        checks.push_back(make_bound_check(
            "blowup_crosscheck_rel_err", rep.rel_trace_oracle, 1e-10, true,
            "trace Z vs product over all initial 1-fronts"));
        checks.push_back(make_check("blowup_crosscheck_shocks",
                                    double(rep.shock_crossings),
                                    double(blocks), 0.0,
                                    "one stationary shock per block"));
        checks.push_back(make_check("blowup_crosscheck_crossings",
                                    double(rep.crossings),
                                    double(rep.expected_fronts), 0.0,
                                    "every initial 1-front crossed once"));
        std::ostringstream cc;
        cc << kCsvMagic << " blowup_crosscheck\n";
        cc << "N,nu,x0,crossings,shocks,interactions,trace_Z,oracle_Z,"
              "analytic_Z,rel_trace_oracle,rel_oracle_analytic\n";
        cc << rep.N << ',' << rep.nu << ',' << format_double(rep.x0) << ','
           << rep.crossings << ',' << rep.shock_crossings << ','
           << rep.interactions << ',' << format_double(rep.trace_Z) << ','
           << format_double(rep.oracle_Z) << ','
           << format_double(rep.analytic_Z) << ','
           << format_double(rep.rel_trace_oracle) << ','
           << format_double(rep.rel_oracle_analytic) << '\n';
        write_atomic(out / "blowup_crosscheck.csv", cc.str());
    }
    return checks;
}

std::vector<Check> suite_transport(const fs::path& out) {
    std::vector<Check> checks;
    const FluxModel m = FluxModel::burgers_linear();

    // Two contacts moving at a(0) = -1 through constant u = 0.
    {
        SimOptions opts;
        opts.retain_log = true;
        Simulation sim(m, 20, StepFunction(0.0),
                       StepFunction({0.0, 0.5}, {1.0, 2.0, 1.0}), opts);
        sim.run_until(0.5);
        const Window w{-0.45, -0.05, 0.1, 0.4};
        const double r = transport_residual(sim, w);
        checks.push_back(make_check("transport_residual_contact", r, 0.0, 1e-8,
                                    "window crossed by one 2-contact"));
        const Window wc{2.0, 3.0, 0.1, 0.4};
        checks.push_back(make_check("transport_residual_constant",
                                    transport_residual(sim, wc), 0.0, 0.0,
                                    "constant-state window"));
    }

    // A 1-front inside the window must be rejected.
    {
        SimOptions opts;
        opts.retain_log = true;
        Simulation sim(m, 20, StepFunction({0.0}, {0.2, -0.2}),
                       StepFunction(1.0), opts);
        sim.run_until(0.5);
        bool rejected = false;
        try {
            transport_residual(sim, Window{-0.2, 0.2, 0.1, 0.4});
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        checks.push_back(make_check("transport_residual_rejects_1front",
                                    rejected ? 1.0 : 0.0, 1.0, 0.0,
                                    "precondition error raised"));
    }

    // Mis-sped fixture: a contact at a(u) + 0.1 leaves a visible residual.
    {
        const double a0 = m.a(0.0);
        const ContactLine bad{0.0, a0 + 0.1, 0.0,
                              std::numeric_limits<double>::infinity(), 1.0,
                              3.0};
        const double r = std::abs(transport_residual_lines(
            a0, {bad}, Window{-0.45, -0.05, 0.1, 0.4}));
        checks.push_back(make_bound_check("transport_residual_missped", r,
                                          1e-2, false,
                                          "wrong-speed contact is detected"));
    }

    std::ostringstream csv;
    csv << kCsvMagic << " transport_residuals\n";
    csv << "check,residual\n";
    for (const auto& c : checks)
        csv << c.name << ',' << format_double(c.value) << '\n';
    write_atomic(out / "transport_residuals.csv", csv.str());
    return checks;
}

int cmd_verify(const std::string& suite, int blocks, int nu,
               const std::string& outdir, const std::string& json_path,
               std::uint64_t cap) {
    const fs::path out(outdir);
    std::vector<std::pair<std::string, std::function<std::vector<Check>()>>>
        suites;
    const bool all = suite.empty() || suite == "all";
    if (all || suite == "cubic")
        suites.emplace_back("cubic", [&] { return suite_cubic(out); });
    if (all || suite == "blowup")
        suites.emplace_back("blowup",
                            [&] { return suite_blowup(out, blocks, nu, cap); });
    if (all || suite == "transport")
        suites.emplace_back("transport", [&] { return suite_transport(out); });
    if (suites.empty())
        throw ConfigError("unknown suite '" + suite +
                          "' (expected all, cubic, blowup or transport)");

    const int threads =
        std::min<int>(env_threads(), static_cast<int>(suites.size()));
    std::vector<std::vector<Check>> results(suites.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < suites.size(); ++i)
            results[i] = suites[i].second();
    } else {
        std::vector<std::future<std::vector<Check>>> futures;
        futures.reserve(suites.size());
        for (auto& s : suites)
            futures.push_back(
                std::async(std::launch::async, [&s] { return s.second(); }));
        for (std::size_t i = 0; i < futures.size(); ++i)
            results[i] = futures[i].get();
    }

    bool all_pass = true;
    json report;
    report["format"] = "tritrack-v1";
    report["suites"] = json::array();
    for (std::size_t i = 0; i < suites.size(); ++i) {
        json js;
        js["name"] = suites[i].first;
        js["checks"] = json::array();
        for (const auto& c : results[i]) {
            all_pass = all_pass && c.pass;
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << suites[i].first
                      << '/' << c.name << "  value=" << format_double(c.value)
                      << " target=" << format_double(c.target);
            if (c.tolerance > 0.0)
                std::cout << " tol=" << format_double(c.tolerance);
            if (!c.note.empty()) std::cout << "  (" << c.note << ')';
            std::cout << '\n';
            json jc;
            jc["name"] = c.name;
            jc["value"] = c.value;
            jc["target"] = c.target;
            jc["tolerance"] = c.tolerance;
            jc["pass"] = c.pass;
            jc["note"] = c.note;
            js["checks"].push_back(std::move(jc));
        }
        report["suites"].push_back(std::move(js));
    }
    report["pass"] = all_pass;

    const fs::path jpath =
        json_path.empty() ? out / "verify_report.json" : fs::path(json_path);
    write_atomic(jpath, report.dump(2) + "\n");
    std::cout << (all_pass ? "verify: all checks passed\n"
                           : "verify: FAILURES present\n")
              << "report: " << jpath.string() << '\n';
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// tvs

int cmd_tvs(const std::string& input, const std::vector<double>& s_list,
            const std::string& csv) {
    const auto [u, v] = read_step_function_csv(input);
    (void)v;
    std::ostringstream csv_out;
    csv_out << kCsvMagic << " tvs\n";
    csv_out << "s,tv,seminorm\n";
    for (double s : s_list) {
        if (!(s > 0.0 && s <= 1.0))
            throw ConfigError("s must lie in (0, 1], got " + format_double(s));
        const TvResult r = tvs(u, s);
        std::cout << "s=" << format_double(s) << " tv=" << format_double(r.tv)
                  << " seminorm=" << format_double(r.seminorm) << '\n';
        csv_out << format_double(s) << ',' << format_double(r.tv) << ','
                << format_double(r.seminorm) << '\n';
    }
    if (!csv.empty()) write_atomic(csv, csv_out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tritrack: wave-front tracking for triangular hyperbolic "
                 "systems"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "run a configured experiment");
    std::string solve_config, solve_outdir;
    solve->add_option("--config", solve_config, "key=value config file")
        ->required();
    solve->add_option("--out", solve_outdir, "override the output directory");

    // riemann
    auto* riemann = app.add_subcommand("riemann", "solve one Riemann problem");
    std::string rm_model = "burgers_linear", rm_csv;
    double rm_M = 0.0, rm_ul = 0.0, rm_vl = 1.0, rm_ur = 0.0, rm_vr = 1.0;
    int rm_nu = 10;
    riemann->add_option("--model", rm_model, "burgers_linear | cubic_shifted");
    auto* rm_m_opt = riemann->add_option("--m", rm_M, "state bound M");
    riemann->add_option("--nu", rm_nu, "grid refinement")->required();
    riemann->add_option("--ul", rm_ul, "left u")->required();
    riemann->add_option("--vl", rm_vl, "left v")->required();
    riemann->add_option("--ur", rm_ur, "right u")->required();
    riemann->add_option("--vr", rm_vr, "right v")->required();
    riemann->add_option("--csv", rm_csv, "also write the fan as CSV");

    // blowup
    auto* blowup = app.add_subcommand("blowup", "run the BV^{1/3-0} blow-up "
                                                "experiment");
    int bl_blocks = 3, bl_nu = 810;
    double bl_from = 1.0;
    std::string bl_out = "out";
    std::uint64_t bl_cap = 200'000'000ULL;
    blowup->add_option("--blocks", bl_blocks, "number of data blocks N")
        ->required();
    blowup->add_option("--nu", bl_nu, "grid refinement (default 810)");
    blowup->add_option("--trace-from", bl_from,
                       "trace origin (default 1.0, right of the data)");
    blowup->add_option("--out", bl_out, "output directory");
    blowup->add_option("--max-interactions", bl_cap, "circuit-breaker cap");

    // verify
    auto* verify = app.add_subcommand("verify", "run the verification scans");
    std::string vf_suite = "all", vf_out = "out", vf_json;
    int vf_blocks = 3, vf_nu = 270;
    std::uint64_t vf_cap = 200'000'000ULL;
    verify->add_option("--suite", vf_suite,
                       "all | cubic | blowup | transport");
    verify->add_option("--blocks", vf_blocks, "blow-up blocks (crosscheck "
                                              "runs when <= 12)");
    verify->add_option("--nu", vf_nu, "crosscheck grid refinement");
    verify->add_option("--out", vf_out, "output directory for scan CSVs");
    verify->add_option("--json", vf_json, "report path (default "
                                          "<out>/verify_report.json)");
    verify->add_option("--max-interactions", vf_cap, "circuit-breaker cap");

    // tvs
    auto* tvs_cmd = app.add_subcommand("tvs", "fractional variation of a CSV "
                                              "step function");
    std::string tv_input, tv_csv;
    std::vector<double> tv_s{1.0, 0.5, 1.0 / 3.0};
    tvs_cmd->add_option("--input", tv_input, "step-function CSV")->required();
    tvs_cmd->add_option("--s", tv_s, "s values in (0, 1]");
    tvs_cmd->add_option("--csv", tv_csv, "also write results as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // command-line errors are configuration errors
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_config, solve_outdir);
        if (riemann->parsed())
            return cmd_riemann(rm_model, rm_M, rm_m_opt->count() > 0, rm_nu,
                               rm_ul, rm_vl, rm_ur, rm_vr, rm_csv);
        if (blowup->parsed())
            return cmd_blowup(bl_blocks, bl_nu, bl_from, bl_out, bl_cap);
        if (verify->parsed())
            return cmd_verify(vf_suite == "all" ? "" : vf_suite, vf_blocks,
                              vf_nu, vf_out, vf_json, vf_cap);
        if (tvs_cmd->parsed()) return cmd_tvs(tv_input, tv_s, tv_csv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const UshError& e) {
        std::cerr << "hyperbolicity error: " << e.what() << '\n';
        return 3;
    } catch (const CircuitBreakerError& e) {
        std::cerr << "circuit breaker: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
