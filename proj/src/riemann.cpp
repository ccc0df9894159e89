#include "tritrack/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tritrack {

const char* wave_kind_name(WaveKind k) {
    switch (k) {
        case WaveKind::Shock1: return "S1";
        case WaveKind::Contact1: return "C1";
        case WaveKind::Contact2: return "C2";
    }
    return "?";
}

bool WaveFan::valid() const {
    for (std::size_t i = 0; i < waves.size(); ++i) {
        const auto& w = waves[i];
        if (w.kind == WaveKind::Contact2) {
            if (i != 0) return false;
            if (w.u_l != w.u_r) return false;
        } else if (w.u_l == w.u_r) {
            return false;
        }
        if (i > 0) {
            if (waves[i - 1].speed > w.speed) return false;
            if (waves[i - 1].u_r != w.u_l || waves[i - 1].Z_r != w.Z_l) return false;
        }
    }
    return true;
}

double shock_speed(const FluxModel& m, double um, double up) {
    if (um == up) throw std::domain_error("shock_speed: equal states");
    return (m.f(up) - m.f(um)) / (up - um);
}

double shock_speed(const GridFlux& g, double um, double up) {
    if (um == up) throw std::domain_error("shock_speed: equal states");
    const std::int64_t km = g.index_of(um), kp = g.index_of(up);
    return (g.node_value(kp) - g.node_value(km)) / (g.node_u(kp) - g.node_u(km));
}

double rh_factor(const FluxModel& m, double um, double up) {
    if (std::abs(up - um) < 1e-14) return 1.0;
    const double s = (m.f(up) - m.f(um)) / (up - um);
    return (s - m.a(up)) / (s - m.a(um)) *
           std::exp(m.potential_A(um) - m.potential_A(up));
}

double rh_plus(const FluxModel& m, double um, double up, double Zp) {
    return Zp * rh_factor(m, um, up);
}

namespace {

// Orientation of (k1,f1)-(k2,f2)-(k3,f3); positive exactly when the middle
// point lies above the chord through the outer two.
double cross3(const GridFlux& g, std::int64_t k1, std::int64_t k2, std::int64_t k3) {
    const double x1 = g.node_u(k1), x2 = g.node_u(k2), x3 = g.node_u(k3);
    const double f1 = g.node_value(k1), f2 = g.node_value(k2), f3 = g.node_value(k3);
    return (x3 - x1) * (f2 - f1) - (x2 - x1) * (f3 - f1);
}

WaveKind classify_segment(const GridFlux& g, std::int64_t ka, std::int64_t kb) {
    if (kb - ka == 1) return WaveKind::Contact1;
    for (std::int64_t k = ka + 1; k < kb; ++k)
        if (cross3(g, ka, k, kb) != 0.0) return WaveKind::Shock1;
    return WaveKind::Contact1;
}

} // namespace

std::vector<ScalarJump> scalar_riemann(const GridFlux& g, double um, double up) {
    std::vector<ScalarJump> fan;
    if (um == up) return fan;
    const std::int64_t km = g.index_of(um), kp = g.index_of(up);
    const std::int64_t lo = std::min(km, kp), hi = std::max(km, kp);
    const bool increasing = km < kp;

    // Monotone-chain hull over the nodes lo..hi: lower convex envelope for
    // increasing data, upper concave for decreasing. Collinear middle points
    // are dropped so segment speeds come out strictly monotone.
    std::vector<std::int64_t> hull;
    for (std::int64_t k = lo; k <= hi; ++k) {
        while (hull.size() >= 2) {
            const double c = cross3(g, hull[hull.size() - 2], hull.back(), k);
            if (increasing ? c >= 0.0 : c <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(k);
    }

    // Jumps traversed from the um side toward up; for decreasing data that is
    // the top of the hull downward, which is also the increasing-speed order.
    const auto emit = [&](std::int64_t ka, std::int64_t kb) {
        ScalarJump j;
        j.k_l = ka;
        j.k_r = kb;
        j.u_l = g.node_u(ka);
        j.u_r = g.node_u(kb);
        j.speed = (g.node_value(kb) - g.node_value(ka)) / (j.u_r - j.u_l);
        j.kind = classify_segment(g, std::min(ka, kb), std::max(ka, kb));
        fan.push_back(j);
    };
    if (increasing) {
        for (std::size_t i = 0; i + 1 < hull.size(); ++i) emit(hull[i], hull[i + 1]);
    } else {
        for (std::size_t i = hull.size(); i-- > 1;) emit(hull[i], hull[i - 1]);
    }
    return fan;
}

bool oleinik_check(const GridFlux& g, double um, double up, double s) {
    if (um == up) return true;
    // Envelope tangency nodes sit exactly on the chord in exact arithmetic;
    // the recomputed chord can land a few ULP past them, so boundary-entropic
    // jumps get a roundoff slack far below any genuine violation.
    constexpr double kSlack = 1e-12;
    const std::int64_t km = g.index_of(um), kp = g.index_of(up);
    const double fm = g.node_value(km);
    const std::int64_t lo = std::min(km, kp), hi = std::max(km, kp);
    for (std::int64_t k = lo + 1; k < hi; ++k) {
        const double chord = fm + s * (g.node_u(k) - g.node_u(km));
        const double fk = g.node_value(k);
        if (um < up ? fk < chord - kSlack : fk > chord + kSlack) return false;
    }
    return true;
}

WaveFan system_riemann(const FluxModel& m, const GridFlux& g, double uL, double ZL,
                       double uR, double ZR) {
    WaveFan out;
    std::vector<ScalarJump> fan = scalar_riemann(g, uL, uR);

    // Chain Z right-to-left along the 1-fan.
    std::vector<double> Z(fan.size() + 1);
    Z[fan.size()] = ZR;
    for (std::size_t i = fan.size(); i-- > 0;)
        Z[i] = rh_plus(m, fan[i].u_l, fan[i].u_r, Z[i + 1]);
    const double Zm = Z[0];

    if (ZL != Zm) {
        ElementaryWave c;
        c.kind = WaveKind::Contact2;
        c.u_l = c.u_r = uL;
        c.k_l = c.k_r = g.index_of(uL);
        c.speed = m.a(uL);
        c.Z_l = ZL;
        c.Z_r = Zm;
        out.waves.push_back(c);
    }
    for (std::size_t i = 0; i < fan.size(); ++i) {
        ElementaryWave w;
        w.kind = fan[i].kind;
        w.speed = fan[i].speed;
        w.u_l = fan[i].u_l;
        w.u_r = fan[i].u_r;
        w.k_l = fan[i].k_l;
        w.k_r = fan[i].k_r;
        w.Z_l = Z[i];
        w.Z_r = Z[i + 1];
        out.waves.push_back(w);
    }
    return out;
}

} // namespace tritrack
