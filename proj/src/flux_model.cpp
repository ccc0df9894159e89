#include "tritrack/flux_model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tritrack/errors.hpp"

namespace tritrack {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(0.0);
}

double Polynomial::operator()(double u) const {
    double r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * u + c_[i];
    return r;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

double FluxModel::potential_A(double u) const {
    if (closed_form_A) return (*closed_form_A)(u);
    if (u == 0.0) return 0.0;
    const auto integrand = [this](double w) { return a_prime(w) / (a(w) - f_prime(w)); };
    double err = 0.0;
    const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, u, 12, 1e-14, &err);
    if (err <= 1e-12) return val;
    // The built-in estimate is conservative on sub-resolution intervals;
    // accept when a rule of different order confirms the required absolute
    // tolerance.
    const double check = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, u, 12, 1e-14);
    if (std::abs(val - check) <= 1e-12) return val;
    throw NumericError("potential_A: quadrature did not reach 1e-12 (err=" +
                       std::to_string(err) + ")");
}

double FluxModel::to_Z(double u, double v) const { return v * std::exp(potential_A(u)); }

double FluxModel::from_Z(double u, double Z) const { return Z * std::exp(-potential_A(u)); }

FluxModel FluxModel::burgers_linear(double M) {
    FluxModel m;
    m.name = "burgers_linear";
    m.f = [](double u) { return 0.5 * u * u; };
    m.f_prime = [](double u) { return u; };
    m.f_second = [](double) { return 1.0; };
    m.a = [](double u) { return u - 1.0; };
    m.a_prime = [](double) { return 1.0; };
    m.bound = M;
    m.closed_form_A = [](double u) { return -u; };
    m.polynomials = {Polynomial({0.0, 0.0, 0.5}), Polynomial({-1.0, 1.0})};
    return m;
}

FluxModel FluxModel::cubic_shifted(double M) {
    FluxModel m;
    m.name = "cubic_shifted";
    m.f = [](double u) { return u * u * u / 3.0 + 2.0 * u; };
    m.f_prime = [](double u) { return u * u + 2.0; };
    m.f_second = [](double u) { return 2.0 * u; };
    m.a = [](double u) { return u - 1.0; };
    m.a_prime = [](double) { return 1.0; };
    m.bound = M;
    m.polynomials = {Polynomial({0.0, 2.0, 0.0, 1.0 / 3.0}), Polynomial({-1.0, 1.0})};
    return m;
}

FluxModel FluxModel::from_polynomials(Polynomial f, Polynomial a, double M, std::string name) {
    FluxModel m;
    m.name = std::move(name);
    const Polynomial fp = f.derivative();
    const Polynomial fpp = fp.derivative();
    const Polynomial ap = a.derivative();
    m.f = f;
    m.f_prime = fp;
    m.f_second = fpp;
    m.a = a;
    m.a_prime = ap;
    m.bound = M;
    m.polynomials = {std::move(f), std::move(a)};
    return m;
}

double check_ush(const FluxModel& m) {
    const double M = m.bound;
    const double step = 1e-4 * (2.0 * M);
    double min_fp = std::numeric_limits<double>::infinity();
    double max_a = -std::numeric_limits<double>::infinity();
    const auto visit = [&](double u) {
        min_fp = std::min(min_fp, m.f_prime(u));
        max_a = std::max(max_a, m.a(u));
    };
    visit(-M);
    visit(M);
    if (step > 0.0) {
        const int n = static_cast<int>(std::ceil(2.0 * M / step));
        for (int i = 1; i < n; ++i) visit(-M + step * i);
    }
    return min_fp - max_a;
}

GridFlux::GridFlux(const FluxModel& m, int nu) : nu_(nu) {
    if (nu < 1) throw std::invalid_argument("GridFlux: nu must be >= 1");
    const auto kM = static_cast<std::int64_t>(std::ceil(m.bound * nu));
    k_min_ = -(kM + 1);
    k_max_ = kM + 1;
    f_.reserve(static_cast<std::size_t>(k_max_ - k_min_ + 1));
    for (std::int64_t k = k_min_; k <= k_max_; ++k) f_.push_back(m.f(node_u(k)));
}

double GridFlux::node_value(std::int64_t k) const {
    if (k < k_min_ || k > k_max_) throw std::domain_error("GridFlux: node out of range");
    return f_[static_cast<std::size_t>(k - k_min_)];
}

double GridFlux::cell_slope(std::int64_t k) const {
    return (node_value(k + 1) - node_value(k)) / (node_u(k + 1) - node_u(k));
}

double GridFlux::value(double u) const {
    const double y = u * nu_;
    auto k = static_cast<std::int64_t>(std::floor(y));
    if (k < k_min_ || k >= k_max_) {
        if (u == node_u(k_max_)) return f_.back();
        throw std::domain_error("GridFlux: evaluation outside covered range");
    }
    const double ul = node_u(k);
    return node_value(k) + cell_slope(k) * (u - ul);
}

std::int64_t GridFlux::index_of(double u) const {
    const std::int64_t k = round_to_grid_index(u, nu_);
    if (k < k_min_ || k > k_max_)
        throw std::domain_error("GridFlux: state outside covered range");
    if (u != node_u(k)) {
        // Allow a last-ulp slack for states that reached us through I/O.
        const double tol = 4e-16 * std::max(1.0, std::abs(u));
        if (std::abs(u - node_u(k)) > tol)
            throw std::domain_error("GridFlux: state is not a grid node");
    }
    return k;
}

GridFlux build_grid_flux(const FluxModel& m, int nu) { return GridFlux(m, nu); }

} // namespace tritrack
