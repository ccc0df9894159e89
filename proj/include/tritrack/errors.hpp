#pragma once

#include <stdexcept>
#include <string>

namespace tritrack {

/// Configuration file / CLI argument problems. CLI maps this to exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform strict hyperbolicity failed for the requested model/bound.
/// CLI maps this to exit status 3.
struct UshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The interaction cap was reached before the requested horizon.
/// CLI maps this to exit status 4.
struct CircuitBreakerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal consistency violation in the front-tracking engine
/// (broken state chaining, a 2-2 collision, ...). Carries a dump of the
/// most recent events to make the failure reproducible.
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A characteristic trace hit a point where Z is not defined (start on a
/// Riemann point, crossing through an interaction point).
struct DegenerateTraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature or another numeric kernel failed to reach its tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tritrack
