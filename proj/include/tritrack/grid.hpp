#pragma once

#include <cmath>
#include <cstdint>

namespace tritrack {

/// Canonical double for the grid node k/nu. Every grid-valued u state in the
/// library is produced by this one expression, so equal nodes compare equal
/// bitwise no matter where they were computed.
inline double grid_point(std::int64_t k, int nu) {
    return static_cast<double>(k) / static_cast<double>(nu);
}

/// Index of the grid node nearest to v, halfway cases resolved toward zero.
inline std::int64_t round_to_grid_index(double v, int nu) {
    const double y = v * static_cast<double>(nu);
    double r = std::round(y); // rounds halfway cases away from zero
    if (std::abs(y - std::trunc(y)) == 0.5) r = std::trunc(y);
    return static_cast<std::int64_t>(r);
}

} // namespace tritrack
