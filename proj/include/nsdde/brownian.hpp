#pragma once

#include <cstdint>
#include <vector>

#include "nsdde/grid.hpp"
#include "nsdde/rational.hpp"

namespace nsdde {

/// One scalar Brownian path sampled at the finest resolution, with the
/// convention B(t) = 0 for t <= 0 (no pre-history noise). Increments are
/// quantized (see rng.hpp) so every bin aggregation is exact and
/// order-independent.
struct FineBrownianPath {
    Rational fine_delta;   // finest step
    Rational horizon;      // T
    std::int64_t steps = 0;
    std::vector<double> increments;  // increments[j] = B((j+1)*delta) - B(j*delta)
    std::vector<double> values;      // values[j] = B(j*delta), values[0] = 0, size steps+1

    /// B at fine node index j, extended by zero to j <= 0.
    double value_at(std::int64_t j) const { return j <= 0 ? 0.0 : values[static_cast<std::size_t>(j)]; }
};

/// Per coarse step k: the Brownian increment dB_k, the iterated integral
/// l1_k = (dB_k^2 - delta)/2 against the current window, and l2_k against the
/// tau-delayed path (realized as a sub-grid Ito sum, zero where the delayed
/// window lies in t <= 0).
struct StepIncrements {
    GridSpec grid;
    std::vector<double> db;
    std::vector<double> l1;
    std::vector<double> l2;
};

/// T/delta independent N(0, delta) draws from the stream keyed by
/// (seed, path_index). Throws BadStep if delta does not divide T.
FineBrownianPath sample_fine_path(std::uint64_t seed, std::uint64_t path_index,
                                  const Rational& horizon, const Rational& fine_delta);

/// Aggregates a fine path to the coarse grid: dB_k sums the fine increments
/// of bin k in ascending index order; l1 from its closed form; l2 from
/// compute_l2. Throws ResolutionMismatch if the fine step does not divide the
/// grid step or the horizons differ.
StepIncrements coarsen_increments(const FineBrownianPath& fine, const GridSpec& grid);

/// Sub-grid Ito sum for the delayed iterated integral over step k:
///   sum_j (B(t_k + j*d - tau) - B(t_k - tau)) * (B(t_k + (j+1)*d) - B(t_k + j*d)).
double compute_l2(const FineBrownianPath& fine, const GridSpec& grid, std::int64_t k);

}  // namespace nsdde
