#pragma once

#include <cstdint>

#include "nsdde/rational.hpp"

namespace nsdde {

/// Uniform grid t_k = k*delta with delta = tau/m = T/M. Node indices run from
/// -2m (the extended initial segment) to M (the horizon).
struct GridSpec {
    Rational delay;    // tau
    Rational horizon;  // T
    Rational delta;    // step
    std::int64_t m = 0;  // tau / delta
    std::int64_t M = 0;  // T / delta

    double dt() const { return delta.value(); }
    double node_time(std::int64_t k) const { return static_cast<double>(k) * dt(); }
};

/// Builds the grid with delta = tau/m. Throws BadStep if delta >= 1 and
/// GridMismatch if T is not an integer multiple of delta.
GridSpec build_grid(const Rational& tau, const Rational& horizon, std::int64_t m);

}  // namespace nsdde
