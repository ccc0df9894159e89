#include "tritrack/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tritrack/grid.hpp"

namespace tritrack {

bool ExtremaSequence::alternating() const {
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i] == values[i + 1]) return false;
        if (i + 2 < values.size()) {
            const bool up = values[i + 1] > values[i];
            const bool up_next = values[i + 2] > values[i + 1];
            if (up == up_next) return false;
        }
    }
    return true;
}

StepFunction::StepFunction(double constant_value) { vs_ = {constant_value}; }

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : xs_(std::move(breakpoints)), vs_(std::move(values)) {
    if (vs_.size() != xs_.size() + 1)
        throw std::invalid_argument("StepFunction: need breakpoints+1 values");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]))
            throw std::invalid_argument("StepFunction: non-finite breakpoint");
        if (i > 0 && !(xs_[i - 1] < xs_[i]))
            throw std::invalid_argument("StepFunction: breakpoints not strictly increasing");
    }
    normalize();
}

StepFunction StepFunction::from_raw(std::vector<double> breakpoints,
                                    std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1)
        throw std::invalid_argument("StepFunction::from_raw: need breakpoints+1 values");
    StepFunction f;
    f.vs_.push_back(values[0]);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (i > 0 && breakpoints[i] < breakpoints[i - 1])
            throw std::invalid_argument("StepFunction::from_raw: breakpoints decrease");
        if (!f.xs_.empty() && breakpoints[i] == f.xs_.back()) {
            f.vs_.back() = values[i + 1]; // zero-width piece: last value wins
        } else {
            f.xs_.push_back(breakpoints[i]);
            f.vs_.push_back(values[i + 1]);
        }
    }
    f.normalize();
    return f;
}

void StepFunction::normalize() {
    std::vector<double> xs, vs;
    xs.reserve(xs_.size());
    vs.reserve(vs_.size());
    vs.push_back(vs_[0]);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (vs_[i + 1] != vs.back()) {
            xs.push_back(xs_[i]);
            vs.push_back(vs_[i + 1]);
        }
    }
    xs_ = std::move(xs);
    vs_ = std::move(vs);
}

double StepFunction::operator()(double x) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return vs_[static_cast<std::size_t>(it - xs_.begin())];
}

double StepFunction::inf_norm() const {
    double m = 0.0;
    for (double v : vs_) m = std::max(m, std::abs(v));
    return m;
}

double StepFunction::mass_relative(double ref) const {
    double m = 0.0;
    for (std::size_t i = 1; i < xs_.size(); ++i)
        m += (vs_[i] - ref) * (xs_[i] - xs_[i - 1]);
    return m;
}

double pow_abs(double d, double p) {
    const double a = std::abs(d);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    if (p == 3.0) return a * a * a;
    if (p == 4.0) return (a * a) * (a * a);
    return std::pow(a, p);
}

StepFunction sample_to_grid(const StepFunction& f, int nu) {
    if (nu < 1) throw std::invalid_argument("sample_to_grid: nu must be >= 1");
    std::vector<double> vs;
    vs.reserve(f.values().size());
    for (double v : f.values()) vs.push_back(grid_point(round_to_grid_index(v, nu), nu));
    return StepFunction(f.breakpoints(), vs);
}

namespace {

std::int64_t floor_index(double v, int nu) {
    return static_cast<std::int64_t>(std::floor(v * static_cast<double>(nu)));
}

std::int64_t ceil_index(double v, int nu) {
    return static_cast<std::int64_t>(std::ceil(v * static_cast<double>(nu)));
}

} // namespace

StepFunction sample_to_grid_tvd(const StepFunction& f, int nu) {
    if (nu < 1) throw std::invalid_argument("sample_to_grid_tvd: nu must be >= 1");
    const auto& v = f.values();
    const std::size_t n = v.size();
    if (n == 1) {
        return StepFunction(grid_point(round_to_grid_index(v[0], nu), nu));
    }

    // Indices of the local extrema (ends included; adjacent values differ
    // because f is normalized).
    std::vector<std::size_t> ext;
    ext.push_back(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool up_in = v[i] > v[i - 1];
        const bool up_out = v[i + 1] > v[i];
        if (up_in != up_out) ext.push_back(i);
    }
    ext.push_back(n - 1);

    // Maxima down, minima up. An end value acts as the extremum of the run it
    // starts or finishes.
    std::vector<double> target(ext.size());
    for (std::size_t j = 0; j < ext.size(); ++j) {
        const std::size_t i = ext[j];
        const std::size_t nb = (j + 1 < ext.size()) ? ext[j + 1] : ext[j - 1];
        const bool is_max = v[i] > v[nb];
        target[j] = is_max ? grid_point(floor_index(v[i], nu), nu)
                           : grid_point(ceil_index(v[i], nu), nu);
    }
    // A run whose endpoints sit strictly inside one grid cell gets its
    // targets swapped across each other by the inward rounding; flatten it
    // onto one node of that cell (the oscillation is below resolution).
    // Raising a minimum's target or lowering a maximum's never re-inverts an
    // earlier pair, so one pass suffices.
    for (std::size_t j = 0; j + 1 < ext.size(); ++j) {
        const double a = v[ext[j]], b = v[ext[j + 1]];
        const bool inverted = (a < b) ? target[j] > target[j + 1]
                                      : target[j] < target[j + 1];
        if (inverted) {
            const double c =
                grid_point(round_to_grid_index(0.5 * (a + b), nu), nu);
            target[j] = target[j + 1] = c;
        }
    }

    std::vector<double> out(n);
    for (std::size_t j = 0; j < ext.size(); ++j) out[ext[j]] = target[j];
    // Interior points of a monotone run: nearest node clamped between the
    // run's rounded endpoints so the run stays monotone.
    for (std::size_t j = 0; j + 1 < ext.size(); ++j) {
        const double lo = std::min(target[j], target[j + 1]);
        const double hi = std::max(target[j], target[j + 1]);
        for (std::size_t i = ext[j] + 1; i < ext[j + 1]; ++i)
            out[i] = std::clamp(grid_point(round_to_grid_index(v[i], nu), nu), lo, hi);
    }
    return StepFunction(f.breakpoints(), out);
}

ExtremaSequence local_extrema(const StepFunction& f) {
    const auto& v = f.values();
    ExtremaSequence e;
    e.values.push_back(v.front());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const bool up_in = v[i] > v[i - 1];
        const bool up_out = v[i + 1] > v[i];
        if (up_in != up_out) e.values.push_back(v[i]);
    }
    if (v.size() > 1) e.values.push_back(v.back());
    return e;
}

TvResult tvs(const StepFunction& f, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("tvs: s must lie in (0, 1]");
    const std::vector<double>& e = local_extrema(f).values;
    const std::size_t m = e.size();
    if (m < 2) return {0.0, 0.0};

    const double p = 1.0 / s;
    // dp[i]: best sum over ordered subsequences ending at extremum i.
    std::vector<double> dp(m, 0.0);
    double best = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        double b = 0.0;
        for (std::size_t j = 0; j < i; ++j)
            b = std::max(b, dp[j] + pow_abs(e[i] - e[j], p));
        dp[i] = b;
        best = std::max(best, b);
    }
    return {best, std::pow(best, s)};
}

double tvs_bruteforce(const StepFunction& f, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("tvs_bruteforce: s must lie in (0, 1]");
    if (f.values().size() > 18)
        throw std::length_error("tvs_bruteforce: refusing more than 18 values");
    // Enumerate over the extremal sample points. Interior points of a
    // monotone run never raise the supremum; at s = 1 their telescoped sums
    // merely re-round the extremal difference, so sharing the DP's ground
    // set is what makes bitwise agreement provable.
    const std::vector<double> v = local_extrema(f).values;
    const double p = 1.0 / s;

    double best = 0.0;
    // Depth-first enumeration of every ordered subset, accumulating
    // left-to-right exactly like the DP does.
    auto rec = [&](auto&& self, std::size_t idx, bool any, double last, double acc) -> void {
        if (idx == v.size()) {
            best = std::max(best, acc);
            return;
        }
        self(self, idx + 1, any, last, acc);
        self(self, idx + 1, true, v[idx], any ? acc + pow_abs(v[idx] - last, p) : 0.0);
    };
    rec(rec, 0, false, 0.0, 0.0);
    return best;
}

} // namespace tritrack
