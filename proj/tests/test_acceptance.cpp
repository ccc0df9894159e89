// Acceptance gate: one self-contained check per criterion, each printing a
// single PASS/FAIL line with its runtime. Exit status is the failure count.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "tritrack/analysis.hpp"
#include "tritrack/errors.hpp"
#include "tritrack/flux_model.hpp"
#include "tritrack/grid.hpp"
#include "tritrack/riemann.hpp"
#include "tritrack/step_function.hpp"
#include "tritrack/wft.hpp"

using namespace tritrack;

namespace {

char detail_buf[512];

template <typename... Args>
std::string detail(const char* fmt, Args... args) {
    std::snprintf(detail_buf, sizeof detail_buf, fmt, args...);
    return detail_buf;
}

StepFunction random_step(std::mt19937& rng, int max_values) {
    std::uniform_int_distribution<int> count(1, max_values);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> gap(0.05, 1.0);
    const int n = count(rng);
    std::vector<double> vs(static_cast<std::size_t>(n));
    for (double& v : vs) v = val(rng);
    std::vector<double> xs(vs.size() - 1);
    double x = 0.0;
    for (double& b : xs) {
        x += gap(rng);
        b = x;
    }
    return StepFunction(std::move(xs), std::move(vs));
}

std::pair<StepFunction, StepFunction> random_grid_data(std::mt19937& rng,
                                                       int nu, int max_index) {
    std::uniform_int_distribution<int> jumps(2, 8);
    std::uniform_int_distribution<int> level(-max_index, max_index);
    std::uniform_real_distribution<double> gap(0.1, 0.6);
    std::uniform_real_distribution<double> vval(0.1, 2.0);
    const int n = jumps(rng);
    std::vector<double> xs, us{0.0}, vs{1.0};
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
        x += gap(rng);
        xs.push_back(x);
        // Equal backgrounds keep the boundary fluxes balanced so the
        // relative masses are conserved (a compact perturbation).
        us.push_back(i + 1 == n ? 0.0 : grid_point(level(rng), nu));
        vs.push_back(i + 1 == n ? 1.0 : vval(rng));
    }
    return {StepFunction::from_raw(xs, us), StepFunction::from_raw(xs, vs)};
}

// --------------------------------------------------------------------------
// Criterion 1: DP tvs equals brute force exactly on 500 random functions.
bool criterion_tvs_oracle(std::string& note) {
    std::mt19937 rng(1000003);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const StepFunction f = random_step(rng, 14);
        for (double s : {1.0, 0.5, 1.0 / 3.0}) {
            if (tvs(f, s).tv != tvs_bruteforce(f, s)) {
                note = detail("mismatch on sample %d at s=%.3f", i, s);
                return false;
            }
            ++checked;
        }
    }
    note = detail("%d comparisons, all bitwise equal", checked);
    return true;
}

// --------------------------------------------------------------------------
// Criterion 2: hand-derived fans at nu = 10, exact arithmetic agreement.
bool criterion_scalar_exact(std::string& note) {
    const FluxModel m = FluxModel::burgers_linear();
    const GridFlux g = build_grid_flux(m, 10);

    const auto shock = scalar_riemann(g, 0.3, -0.3);
    if (shock.size() != 1 || shock[0].kind != WaveKind::Shock1 ||
        shock[0].speed != 0.0) {
        note = "reversed +-0.3 shock is not a single standing front";
        return false;
    }

    const auto fan = scalar_riemann(g, -0.2, 0.2);
    if (fan.size() != 4) {
        note = detail("rarefaction split into %zu fronts, expected 4",
                      fan.size());
        return false;
    }
    const double hand[] = {-0.15, -0.05, 0.05, 0.15};
    for (int i = 0; i < 4; ++i) {
        const std::int64_t k = i - 2;
        // Same-arithmetic secant of the grid flux over one cell.
        const double secant = (g.node_value(k + 1) - g.node_value(k)) /
                              (g.node_u(k + 1) - g.node_u(k));
        if (fan[std::size_t(i)].speed != secant) {
            note = detail("cell %d speed differs from its own secant", i);
            return false;
        }
        if (std::abs(fan[std::size_t(i)].speed - hand[i]) > 1e-15) {
            note = detail("cell %d speed %.17g vs hand value %.17g", i,
                          fan[std::size_t(i)].speed, hand[i]);
            return false;
        }
        if (fan[std::size_t(i)].kind != WaveKind::Contact1) {
            note = detail("cell %d is not a 1-contact", i);
            return false;
        }
    }
    note = "standing shock bitwise 0; fan speeds match secants bitwise, "
           "hand values to 1e-15";
    return true;
}

// --------------------------------------------------------------------------
// Criterion 3: v_m = 13/7 for (0.3,1)/(-0.3,1), 1e-14 relative.
bool criterion_vm(std::string& note) {
    const FluxModel m = FluxModel::burgers_linear();
    const GridFlux g = build_grid_flux(m, 10);
    const WaveFan fan =
        system_riemann(m, g, 0.3, m.to_Z(0.3, 1.0), -0.3, m.to_Z(-0.3, 1.0));
    if (fan.waves.size() != 2 || fan.waves[0].kind != WaveKind::Contact2) {
        note = "fan is not contact + shock";
        return false;
    }
    const double v_m = m.from_Z(0.3, fan.waves[1].Z_l);
    const double rel = std::abs(v_m - 13.0 / 7.0) / (13.0 / 7.0);
    note = detail("v_m = %.17g, relative error %.3g", v_m, rel);
    return rel <= 1e-14;
}

// --------------------------------------------------------------------------
// Criterion 4: cubic flatness exponent 3.00 +- 0.05 for both models,
// burgers constant 2/3 +- 2%.
bool criterion_flatness(std::string& note) {
    const FitReport rb = cubic_flatness_scan(FluxModel::burgers_linear(), 60);
    const FitReport rc = cubic_flatness_scan(FluxModel::cubic_shifted(), 60);
    const double c_rel = std::abs(rb.fitted_constant - 2.0 / 3.0) / (2.0 / 3.0);
    note = detail("exponents %.4f / %.4f, burgers constant %.5f (dev %.2f%%)",
                  rb.fitted_exponent, rc.fitted_exponent, rb.fitted_constant,
                  100.0 * c_rel);
    return rb.pass && rc.pass && c_rel <= 0.02;
}

// --------------------------------------------------------------------------
// Criterion 5: |v_m(nu) - e^{-0.6}| decays like nu^-2 across the fan.
bool criterion_fan_convergence(std::string& note) {
    const FluxModel m = FluxModel::burgers_linear();
    std::vector<std::array<double, 2>> samples;
    for (int nu : {20, 40, 80, 160}) {
        const GridFlux g = build_grid_flux(m, nu);
        const auto fan = scalar_riemann(g, -0.3, 0.3);
        double Z = m.to_Z(0.3, 1.0);
        for (std::size_t i = fan.size(); i-- > 0;)
            Z = rh_plus(m, fan[i].u_l, fan[i].u_r, Z);
        const double v_m = m.from_Z(-0.3, Z);
        samples.push_back({double(nu), std::abs(v_m - std::exp(-0.6))});
    }
    const FitReport fit = fit_loglog("fan_convergence", samples, -2.0, 0.3);
    note = detail("slope %.4f over nu in [20,160]", fit.fitted_exponent);
    return fit.pass;
}

// --------------------------------------------------------------------------
// Criterion 6: conservation, positivity, per-event TVs decay, and a single
// exponential constant bounding the Z amplification across 20 random runs.
bool criterion_engine_invariants(std::string& note) {
    constexpr double kGlobalC = 2.0; // frozen exponential-bound constant
    const FluxModel m = FluxModel::burgers_linear();
    std::mt19937 rng(90210);
    double worst_fit = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto [u0, v0] = random_grid_data(rng, 50, 16);
        SimOptions o;
        o.retain_log = true;
        Simulation sim(m, 50, u0, v0, o);
        const Snapshot s0 = sim.snapshot(0.0);
        const double mu0 = s0.u.mass_relative(0.0);
        const double vref = v0.values().front();
        const double mv0 = s0.v.mass_relative(vref);
        const double Z0 = s0.Z.inf_norm();
        const double tv13_u0 = tvs(s0.u, 1.0 / 3.0).tv;

        double prev[3] = {tvs(s0.u, 1.0).tv, tvs(s0.u, 0.5).tv, tv13_u0};
        while (sim.step(1.0)) {
            const Snapshot s = sim.snapshot(sim.clock());
            const double now[3] = {tvs(s.u, 1.0).tv, tvs(s.u, 0.5).tv,
                                   tvs(s.u, 1.0 / 3.0).tv};
            for (int k = 0; k < 3; ++k) {
                if (now[k] > prev[k] + 1e-12) {
                    note = detail("trial %d: TV^s rose at t=%.6f (s index %d)",
                                  trial, sim.clock(), k);
                    return false;
                }
                prev[k] = now[k];
            }
        }
        sim.run_until(1.0);
        const Snapshot s1 = sim.snapshot(1.0);
        if (std::abs(s1.u.mass_relative(0.0) - mu0) > 1e-10) {
            note = detail("trial %d: u mass drift %.3g", trial,
                          std::abs(s1.u.mass_relative(0.0) - mu0));
            return false;
        }
        if (std::abs(s1.v.mass_relative(vref) - mv0) >
            1e-10 * std::max(1.0, std::abs(mv0))) {
            note = detail("trial %d: v mass drift %.3g", trial,
                          std::abs(s1.v.mass_relative(vref) - mv0));
            return false;
        }
        for (double v : s1.v.values())
            if (!(v > 0.0)) {
                note = detail("trial %d: v reached %.3g", trial, v);
                return false;
            }
        if (tv13_u0 > 0.0) {
            const double fit = std::log(sim.stats().max_abs_Z / Z0) / tv13_u0;
            worst_fit = std::max(worst_fit, fit);
        }
    }
    note = detail("fitted exponential constant C = %.4f (bound %.1f)",
                  worst_fit, kGlobalC);
    return worst_fit <= kGlobalC;
}

// --------------------------------------------------------------------------
// Criterion 7: blow-up growth rate 2/3 over N up to 10^6, monotone.
bool criterion_growth(std::string& note) {
    const FitReport fit = blowup_growth_fit({1000, 10000, 100000, 1000000});
    note = detail("slope %.5f (target 2/3 +- 2%%), monotone %s",
                  fit.fitted_exponent, fit.aux == 1.0 ? "yes" : "NO");
    return fit.pass && fit.aux == 1.0;
}

// --------------------------------------------------------------------------
// Criterion 8: traced characteristic vs rounded-coefficient product at
// nu = 3^4 * 10 = 810 for N in {1, 2, 3, 6, 12}.
bool criterion_crosscheck(std::string& note) {
    double worst = 0.0;
    std::uint64_t events = 0;
    for (int N : {1, 2, 3, 6, 12}) {
        const CrosscheckReport rep = blowup_wft_crosscheck(N, 810);
        events += rep.interactions;
        worst = std::max(worst, rep.rel_trace_oracle);
        if (rep.crossings != rep.expected_fronts) {
            note = detail("N=%d: crossed %zu of %zu fronts", N, rep.crossings,
                          rep.expected_fronts);
            return false;
        }
        if (rep.rel_trace_oracle > 1e-10) {
            note = detail("N=%d: relative error %.3g", N, rep.rel_trace_oracle);
            return false;
        }
    }
    note = detail("worst relative error %.3g over %llu interactions", worst,
                  static_cast<unsigned long long>(events));
    return true;
}

// --------------------------------------------------------------------------
// Criterion 9: BV^s dichotomy of the blow-up data.
bool criterion_bvs_dichotomy(std::string& note) {
    const BlowupData d = build_blowup_data(1000);
    const double tv13 = tvs(d.u0, 1.0 / 3.0).tv;
    const double floor13 = 8.0 * std::log(1026.0) * 0.95;
    if (!(tv13 > floor13)) {
        note = detail("tvs_{1/3} = %.3f, needs > %.3f", tv13, floor13);
        return false;
    }
    double prev = tvs(build_blowup_data(1000).u0, 0.25).seminorm;
    double max_inc = 0.0;
    for (int N = 1001; N <= 1010; ++N) {
        const double cur = tvs(build_blowup_data(N).u0, 0.25).seminorm;
        max_inc = std::max(max_inc, cur - prev);
        if (!(cur - prev < 1e-3)) {
            note = detail("seminorm increment %.3g at N=%d", cur - prev, N);
            return false;
        }
        prev = cur;
    }
    note = detail("tvs_{1/3}(10^3) = %.2f > %.2f; max s=1/4 increment %.2g",
                  tv13, floor13, max_inc);
    return true;
}

// --------------------------------------------------------------------------
// Criterion 10: transport residual on front-free windows and the fixture.
bool criterion_transport(std::string& note) {
    const FluxModel m = FluxModel::burgers_linear();
    SimOptions o;
    o.retain_log = true;
    Simulation sim(m, 20, StepFunction(0.0),
                   StepFunction({0.0, 0.5}, {1.0, 2.0, 1.0}), o);
    sim.run_until(0.5);
    const Window w{-0.45, -0.05, 0.1, 0.4}; // crossed by one 2-contact
    const double r_contact = std::abs(transport_residual(sim, w));
    const double r_const =
        std::abs(transport_residual(sim, Window{2.0, 3.0, 0.1, 0.4}));
    const double a0 = m.a(0.0);
    const ContactLine bad{0.0, a0 + 0.1, 0.0,
                          std::numeric_limits<double>::infinity(), 1.0, 3.0};
    const double r_bad = std::abs(transport_residual_lines(a0, {bad}, w));
    note = detail("contact %.2g, constant %.2g, mis-sped fixture %.3g",
                  r_contact, r_const, r_bad);
    return r_contact <= 1e-8 && r_const <= 1e-8 && r_bad >= 1e-2;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        double budget_s;
        bool (*fn)(std::string&);
    };
    const Entry entries[] = {
        {1, "TVs dynamic program equals brute force (500 random)", 10.0,
         criterion_tvs_oracle},
        {2, "scalar Riemann fans match hand derivation at nu=10", 1.0,
         criterion_scalar_exact},
        {3, "system Riemann middle state v_m = 13/7", 1.0, criterion_vm},
        {4, "cubic flatness exponent 3 +- 0.05, constant 2/3 +- 2%", 5.0,
         criterion_flatness},
        {5, "rarefaction Z-convergence slope -2 +- 0.3", 5.0,
         criterion_fan_convergence},
        {6, "engine conservation, positivity, TVs decay, Z bound", 60.0,
         criterion_engine_invariants},
        {7, "blow-up growth slope 2/3 +- 2%, monotone", 5.0,
         criterion_growth},
        {8, "engine-vs-product crosscheck <= 1e-10 at nu=810", 120.0,
         criterion_crosscheck},
        {9, "BVs dichotomy: 1/3 diverges, 1/4 increments < 1e-3", 30.0,
         criterion_bvs_dichotomy},
        {10, "transport residual <= 1e-8; fixture >= 1e-2", 5.0,
         criterion_transport},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string note;
        bool ok = false;
        try {
            ok = e.fn(note);
        } catch (const std::exception& ex) {
            note = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        const bool in_budget = secs < e.budget_s;
        if (!(ok && in_budget)) ++failures;
        std::printf("[%s] criterion %2d: %s  (%.2fs, budget %.0fs)%s%s\n",
                    ok && in_budget ? "PASS" : "FAIL", e.id, e.label, secs,
                    e.budget_s, note.empty() ? "" : " -- ", note.c_str());
        std::fflush(stdout);
    }
    if (failures)
        std::printf("%d of 10 acceptance criteria FAILED\n", failures);
    else
        std::printf("all 10 acceptance criteria passed\n");
    return failures;
}
