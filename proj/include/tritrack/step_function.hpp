#pragma once

#include <cstddef>
#include <vector>

namespace tritrack {

/// Result of a fractional total variation computation: tv is the supremum of
/// sum |u(x_{i+1}) - u(x_i)|^{1/s}, seminorm is tv^s.
struct TvResult {
    double tv = 0.0;
    double seminorm = 0.0;
};

/// Values of a step function at its local extrema, end values included.
/// Interior entries alternate strictly between local maxima and minima.
struct ExtremaSequence {
    std::vector<double> values;

    bool alternating() const;
    std::size_t size() const { return values.size(); }
};

/// Piecewise constant function on the line, right-continuous, with finitely
/// many jumps. Stored normalized: breakpoints strictly increasing and every
/// adjacent pair of values distinct. values() has one more entry than
/// breakpoints(); values()[i] is taken on [breakpoints()[i-1], breakpoints()[i]).
class StepFunction {
public:
    /// Constant function.
    explicit StepFunction(double constant_value);

    /// Throws std::invalid_argument unless breakpoints are strictly
    /// increasing and finite and values has exactly one more entry.
    /// The result is normalized (zero-height jumps merged away).
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    /// Tolerant constructor for engine output: breakpoints may repeat
    /// (non-decreasing); at a repeated breakpoint the last value wins
    /// (zero-width pieces are dropped). Normalizes afterwards.
    static StepFunction from_raw(std::vector<double> breakpoints,
                                 std::vector<double> values);

    /// Right-continuous evaluation; at a breakpoint returns the right limit.
    double operator()(double x) const;

    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& values() const { return vs_; }
    std::size_t piece_count() const { return vs_.size(); }

    double inf_norm() const;

    /// Integral of (f - ref) over the finite pieces, i.e. between the first
    /// and last breakpoint. Meaningful for compact perturbations of ref.
    double mass_relative(double ref) const;

    bool operator==(const StepFunction&) const = default;

private:
    StepFunction() = default;
    void normalize();

    std::vector<double> xs_; // strictly increasing
    std::vector<double> vs_; // xs_.size() + 1 entries, adjacent entries differ
};

/// |d|^p with a fixed operation order shared by every TVs computation in the
/// library (the exact-equality contract between tvs and tvs_bruteforce
/// depends on both sides using the same arithmetic).
double pow_abs(double d, double p);

/// Round every value of f to the nearest grid node k/nu, ties toward zero.
/// Sup-norm distance to f is at most 1/(2 nu). Values already on the grid
/// are fixed points. Throws std::invalid_argument for nu < 1.
StepFunction sample_to_grid(const StepFunction& f, int nu);

/// Grid sampling that never increases TVs for any s in (0,1]: local maxima
/// are rounded down, local minima up, monotone interiors to the nearest node
/// clamped between the surrounding extrema targets. A run whose endpoints
/// fall strictly inside one grid cell is flattened onto a node of that cell.
/// Sup-norm distance is at most 1/nu; extrema round toward the interior of
/// the range, so output values exceed [min f, max f] only where a run
/// flattens, and then by less than one cell.
StepFunction sample_to_grid_tvd(const StepFunction& f, int nu);

/// Collapse monotone runs of the value sequence; first and last values are
/// always kept.
ExtremaSequence local_extrema(const StepFunction& f);

/// Exact supremum defining TV^s via the extrema reduction and an O(m^2)
/// dynamic program over ordered subsequences of the extrema.
/// Throws std::domain_error unless 0 < s <= 1.
TvResult tvs(const StepFunction& f, double s);

/// Exhaustive maximum over all ordered subsets of the extremal sample
/// points (interior points of a monotone run never raise the supremum).
/// Oracle for tvs; refuses (std::length_error) for more than 18 values.
double tvs_bruteforce(const StepFunction& f, double s);

} // namespace tritrack
