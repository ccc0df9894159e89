#pragma once

#include <cstdint>
#include <vector>

#include "tritrack/flux_model.hpp"

namespace tritrack {

enum class WaveKind { Shock1, Contact1, Contact2 };

const char* wave_kind_name(WaveKind k);

/// One discontinuity of the self-similar Riemann solution, with full (u, Z)
/// states on both sides. For 1-waves u_l != u_r; a Contact2 has u_l == u_r
/// and moves at exactly a(u).
struct ElementaryWave {
    WaveKind kind = WaveKind::Shock1;
    double speed = 0.0;
    double u_l = 0.0, u_r = 0.0;
    double Z_l = 0.0, Z_r = 0.0;
    // Grid indices of the u states (valid for waves produced from a GridFlux).
    std::int64_t k_l = 0, k_r = 0;

    int family() const { return kind == WaveKind::Contact2 ? 2 : 1; }
};

/// Ordered wave fan; speeds nondecreasing left to right, states chain, and at
/// most one Contact2 which is leftmost.
struct WaveFan {
    std::vector<ElementaryWave> waves;

    bool valid() const;
};

/// Jump of the scalar (u-only) Riemann solution for a piecewise linear flux.
struct ScalarJump {
    double u_l = 0.0, u_r = 0.0;
    double speed = 0.0;
    WaveKind kind = WaveKind::Shock1; // Shock1 or Contact1
    std::int64_t k_l = 0, k_r = 0;
};

/// Rankine-Hugoniot speed (f(up) - f(um)) / (up - um).
/// Throws std::domain_error when um == up.
double shock_speed(const FluxModel& m, double um, double up);
double shock_speed(const GridFlux& g, double um, double up);

/// Global RH curve factor r(um, up) = (s - a(up))/(s - a(um)) *
/// exp(A(um) - A(up)), with s the exact-flux chord slope. Returns exactly 1
/// when |up - um| < 1e-14 (removable coincidence limit). Positive under USH.
double rh_factor(const FluxModel& m, double um, double up);

/// Z on the left side of a 1-jump given Z on the right: Zm = Zp * r(um, up).
double rh_plus(const FluxModel& m, double um, double up, double Zp);

/// Entropy solution of the scalar Riemann problem for the grid flux: the
/// jump fan of the lower convex (um < up) or upper concave (um > up)
/// envelope of f_nu between the two states. States must be grid nodes
/// (std::domain_error otherwise); equal states yield an empty fan. Speeds
/// come out strictly increasing.
std::vector<ScalarJump> scalar_riemann(const GridFlux& g, double um, double up);

/// Oleinik chord condition for the jump (um, up) with speed s against f_nu:
/// the chord lies below f_nu between the states when um < up, above when
/// um > up (inclusive up to a 1e-12 roundoff slack for envelope tangency
/// nodes; vacuous for equal states).
bool oleinik_check(const GridFlux& g, double um, double up, double s);

/// Full system Riemann solution: the scalar fan, the Z chain attached
/// right-to-left through rh_plus, and a leading Contact2 at speed a(u_left)
/// exactly when the chained Z_m differs from Z_left.
WaveFan system_riemann(const FluxModel& m, const GridFlux& g, double uL, double ZL,
                       double uR, double ZR);

} // namespace tritrack
