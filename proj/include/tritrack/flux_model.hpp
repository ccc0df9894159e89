#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tritrack/grid.hpp"

namespace tritrack {

/// Dense polynomial in ascending powers, with symbolic differentiation.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    double operator()(double u) const;
    Polynomial derivative() const;
    const std::vector<double>& coeffs() const { return c_; }

private:
    std::vector<double> c_;
};

/// A triangular system: scalar flux f for u, transport velocity a(u) for v,
/// with the working bound M on |u|. Uniform strict hyperbolicity (USH) means
/// inf_{|u|<=M} f' > sup_{|u|<=M} a.
struct FluxModel {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
    std::function<double(double)> f_second;
    std::function<double(double)> a;
    std::function<double(double)> a_prime;
    double bound = 1.0; // M

    /// Closed-form potential A, registered for models where it is known.
    std::optional<std::function<double(double)>> closed_form_A;

    /// Present when f and a are polynomials; enables the exact-arithmetic
    /// collision mode and symbolic derivatives.
    std::optional<std::pair<Polynomial, Polynomial>> polynomials;

    /// A(u) = int_0^u a'(w) / (a(w) - f'(w)) dw, A(0) = 0. Uses the closed
    /// form when registered, otherwise adaptive Gauss-Kronrod quadrature to
    /// absolute tolerance 1e-12 (NumericError on non-convergence).
    double potential_A(double u) const;

    double to_Z(double u, double v) const;
    double from_Z(double u, double Z) const;

    /// f = u^2/2, a = u - 1; A(u) = -u in closed form.
    static FluxModel burgers_linear(double M = 1.0 / 3.0);

    /// f = u^3/3 + 2u, a = u - 1. Non-convex flux, USH on M = 1; A is left to
    /// quadrature on purpose (exercises the generic path).
    static FluxModel cubic_shifted(double M = 1.0);

    /// Generic polynomial pair; derivatives taken symbolically.
    static FluxModel from_polynomials(Polynomial f, Polynomial a, double M,
                                      std::string name = "polynomial");
};

/// USH margin inf f' - sup a over [-M, M], sampled at resolution 1e-4*(2M)
/// plus both endpoints. May be <= 0; callers decide whether to reject.
double check_ush(const FluxModel& m);

/// Piecewise linear interpolant of f on the nodes k/nu covering
/// [-M - 1/nu, M + 1/nu] (one cell beyond the working range).
class GridFlux {
public:
    GridFlux(const FluxModel& m, int nu);

    int nu() const { return nu_; }
    std::int64_t k_min() const { return k_min_; }
    std::int64_t k_max() const { return k_max_; }

    double node_u(std::int64_t k) const { return grid_point(k, nu_); }
    double node_value(std::int64_t k) const;

    /// Secant slope of f over cell [k/nu, (k+1)/nu].
    double cell_slope(std::int64_t k) const;

    /// Piecewise linear evaluation; throws std::domain_error outside the
    /// covered range.
    double value(double u) const;

    /// Grid index of a grid-valued state; throws std::domain_error when u is
    /// not (numerically) a covered node.
    std::int64_t index_of(double u) const;

private:
    int nu_;
    std::int64_t k_min_, k_max_;
    std::vector<double> f_; // f_[k - k_min_] = f(k/nu)
};

GridFlux build_grid_flux(const FluxModel& m, int nu);

} // namespace tritrack
