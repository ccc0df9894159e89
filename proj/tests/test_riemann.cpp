#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tritrack/flux_model.hpp"
#include "tritrack/riemann.hpp"

using namespace tritrack;

TEST_CASE("shock speed is the secant slope") {
    const FluxModel m = FluxModel::burgers_linear();
    CHECK(shock_speed(m, 0.3, -0.3) == 0.0);
    CHECK(shock_speed(m, 0.3, 0.1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS(shock_speed(m, 0.2, 0.2), std::domain_error);

    const GridFlux g = build_grid_flux(m, 10);
    CHECK(shock_speed(g, 0.3, -0.3) == 0.0);
    CHECK_THROWS_AS(shock_speed(g, 0.1, 0.1), std::domain_error);
}

TEST_CASE("rh factor on pinned values") {
    const FluxModel m = FluxModel::burgers_linear();
    // r(b, -b) = (1+b)/(1-b) e^{-2b} for the standing shock.
    const double r = rh_factor(m, 0.1, -0.1);
    CHECK(r == doctest::Approx((1.1 / 0.9) * std::exp(-0.2)).epsilon(1e-15));
    CHECK(rh_factor(m, 0.3, -0.3) ==
          doctest::Approx((1.3 / 0.7) * std::exp(-0.6)).epsilon(1e-15));
    // Degenerate jump: exactly 1.
    CHECK(rh_factor(m, 0.2, 0.2 + 5e-15) == 1.0);
    // Cubic small shock: r - 1 of cubic order.
    const FluxModel c = FluxModel::cubic_shifted();
    const double rc = rh_factor(c, 0.01, -0.01);
    CHECK(std::abs(rc - 1.0) < 1e-5);
    CHECK(rc > 0.0);
    // rh_plus chains Z across the jump.
    CHECK(rh_plus(m, 0.1, -0.1, 2.0) == doctest::Approx(2.0 * r).epsilon(1e-15));
}

TEST_CASE("scalar riemann: shock for decreasing convex data") {
    const FluxModel m = FluxModel::burgers_linear();
    const GridFlux g = build_grid_flux(m, 10);
    const auto jumps = scalar_riemann(g, 0.3, -0.3);
    REQUIRE(jumps.size() == 1);
    CHECK(jumps[0].kind == WaveKind::Shock1);
    CHECK(jumps[0].speed == 0.0);
    CHECK(jumps[0].u_l == 0.3);
    CHECK(jumps[0].u_r == -0.3);
    CHECK(oleinik_check(g, 0.3, -0.3, 0.0));
    CHECK(!oleinik_check(g, -0.3, 0.3, 0.0)); // the reversed jump is not admissible
}

TEST_CASE("scalar riemann: rarefaction splits into unit-cell contacts") {
    const FluxModel m = FluxModel::burgers_linear();
    const GridFlux g = build_grid_flux(m, 10);
    const auto jumps = scalar_riemann(g, -0.2, 0.2);
    REQUIRE(jumps.size() == 4);
    const double expected_speeds[] = {-0.15, -0.05, 0.05, 0.15};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(jumps[i].kind == WaveKind::Contact1);
        CHECK(jumps[i].speed == doctest::Approx(expected_speeds[i]).epsilon(1e-15));
        CHECK(jumps[i].u_l == grid_point(std::int64_t(i) - 2, 10));
        CHECK(jumps[i].u_r == grid_point(std::int64_t(i) - 1, 10));
    }
}

TEST_CASE("scalar riemann on random grid data is a monotone admissible chain") {
    const FluxModel burgers = FluxModel::burgers_linear();
    const FluxModel cubic = FluxModel::cubic_shifted();
    std::mt19937 rng(42);
    for (const FluxModel* m : {&burgers, &cubic}) {
        const int nu = 20;
        const GridFlux g = build_grid_flux(*m, nu);
        std::uniform_int_distribution<std::int64_t> pick(
            std::int64_t(-m->bound * nu), std::int64_t(m->bound * nu));
        for (int trial = 0; trial < 200; ++trial) {
            const double ul = grid_point(pick(rng), nu);
            const double ur = grid_point(pick(rng), nu);
            const auto jumps = scalar_riemann(g, ul, ur);
            if (ul == ur) {
                CHECK(jumps.empty());
                continue;
            }
            REQUIRE(!jumps.empty());
            CHECK(jumps.front().u_l == ul);
            CHECK(jumps.back().u_r == ur);
            for (std::size_t i = 0; i < jumps.size(); ++i) {
                CHECK(oleinik_check(g, jumps[i].u_l, jumps[i].u_r,
                                    jumps[i].speed));
                CHECK(jumps[i].speed ==
                      doctest::Approx(shock_speed(g, jumps[i].u_l, jumps[i].u_r))
                          .epsilon(1e-13));
                if (i > 0) {
                    CHECK(jumps[i - 1].u_r == jumps[i].u_l);
                    CHECK(jumps[i - 1].speed < jumps[i].speed);
                }
            }
        }
    }
}

TEST_CASE("cubic flux straddling the inflection yields a composite fan") {
    const FluxModel m = FluxModel::cubic_shifted();
    const GridFlux g = build_grid_flux(m, 50);
    const auto jumps = scalar_riemann(g, -0.4, 0.5);
    REQUIRE(jumps.size() > 1);
    bool has_shock = false, has_contact = false;
    for (const auto& j : jumps) {
        has_shock = has_shock || j.kind == WaveKind::Shock1;
        has_contact = has_contact || j.kind == WaveKind::Contact1;
    }
    CHECK(has_shock);   // concave stretch of f on u < 0 travels as a shock
    CHECK(has_contact); // convex stretch resolves into a fan
}

TEST_CASE("system riemann reproduces the hand-computed two-wave fan") {
    const FluxModel m = FluxModel::burgers_linear();
    const GridFlux g = build_grid_flux(m, 10);
    const double ZL = m.to_Z(0.3, 1.0);
    const double ZR = m.to_Z(-0.3, 1.0);
    const WaveFan fan = system_riemann(m, g, 0.3, ZL, -0.3, ZR);
    REQUIRE(fan.waves.size() == 2);
    CHECK(fan.valid());

    const ElementaryWave& c2 = fan.waves[0];
    CHECK(c2.kind == WaveKind::Contact2);
    CHECK(c2.speed == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(c2.u_l == 0.3);
    CHECK(c2.u_r == 0.3);

    const ElementaryWave& s1 = fan.waves[1];
    CHECK(s1.kind == WaveKind::Shock1);
    CHECK(s1.speed == 0.0);

    // The middle v state: 13/7, exact up to the exponential round trip.
    const double v_m = m.from_Z(0.3, s1.Z_l);
    CHECK(std::abs(v_m - 13.0 / 7.0) <= 1e-14 * (13.0 / 7.0));
    CHECK(c2.Z_r == s1.Z_l);
    CHECK(c2.Z_l == ZL);
    CHECK(s1.Z_r == ZR);
}

TEST_CASE("system riemann drops the contact when Z is already matched") {
    const FluxModel m = FluxModel::burgers_linear();
    const GridFlux g = build_grid_flux(m, 10);
    const double ZR = m.to_Z(-0.3, 1.0);
    const double Zm = rh_plus(m, 0.3, -0.3, ZR);
    const WaveFan fan = system_riemann(m, g, 0.3, Zm, -0.3, ZR);
    REQUIRE(fan.waves.size() == 1);
    CHECK(fan.waves[0].kind == WaveKind::Shock1);

    // Pure v jump: a single 2-contact at characteristic speed.
    const WaveFan contact_only = system_riemann(m, g, 0.0, 2.0, 0.0, 1.0);
    REQUIRE(contact_only.waves.size() == 1);
    CHECK(contact_only.waves[0].kind == WaveKind::Contact2);
    CHECK(contact_only.waves[0].speed == doctest::Approx(-1.0).epsilon(1e-15));

    // Identical states: empty fan.
    CHECK(system_riemann(m, g, 0.1, 1.0, 0.1, 1.0).waves.empty());
}

TEST_CASE("system riemann chains Z right-to-left through every 1-wave") {
    const FluxModel m = FluxModel::cubic_shifted();
    const GridFlux g = build_grid_flux(m, 50);
    const double ZR = 1.7;
    const WaveFan fan = system_riemann(m, g, -0.4, 0.9, 0.5, ZR);
    REQUIRE(fan.waves.size() >= 2);
    CHECK(fan.valid());
    double Z = ZR;
    for (std::size_t i = fan.waves.size(); i-- > 0;) {
        const auto& w = fan.waves[i];
        if (w.kind == WaveKind::Contact2) continue;
        CHECK(w.Z_r == Z);
        Z = rh_plus(m, w.u_l, w.u_r, Z);
        CHECK(w.Z_l == Z);
    }
    // The leading contact bridges whatever mismatch remains.
    CHECK(fan.waves[0].kind == WaveKind::Contact2);
    CHECK(fan.waves[0].Z_l == 0.9);
    CHECK(fan.waves[0].Z_r == Z);
    // All 2-speeds stay below all 1-speeds (USH).
    CHECK(fan.waves[0].speed < fan.waves[1].speed);
}
