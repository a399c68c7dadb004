#include "nsdde/brownian.hpp"

#include <cmath>

#include "nsdde/errors.hpp"
#include "nsdde/rng.hpp"

namespace nsdde {

FineBrownianPath sample_fine_path(std::uint64_t seed, std::uint64_t path_index,
                                  const Rational& horizon, const Rational& fine_delta) {
    if (!fine_delta.positive()) throw BadStep("fine step must be positive");
    const std::int64_t steps = Rational::exact_quotient(horizon, fine_delta);
    if (steps < 0)
        throw BadStep("fine step " + fine_delta.str() + " does not divide horizon " +
                      horizon.str());

    FineBrownianPath path;
    path.fine_delta = fine_delta;
    path.horizon = horizon;
    path.steps = steps;
    path.increments.resize(static_cast<std::size_t>(steps));
    path.values.resize(static_cast<std::size_t>(steps) + 1);

    NormalStream normals(seed, path_index);
    const double scale = std::sqrt(fine_delta.value());
    path.values[0] = 0.0;
    for (std::int64_t j = 0; j < steps; ++j) {
        const double inc = quantize_increment(scale * normals.next());
        path.increments[static_cast<std::size_t>(j)] = inc;
        path.values[static_cast<std::size_t>(j) + 1] = path.values[static_cast<std::size_t>(j)] + inc;
    }
    return path;
}

StepIncrements coarsen_increments(const FineBrownianPath& fine, const GridSpec& grid) {
    if (!(fine.horizon == grid.horizon))
        throw ResolutionMismatch("fine path horizon " + fine.horizon.str() +
                                 " differs from grid horizon " + grid.horizon.str());
    const std::int64_t ratio = Rational::exact_quotient(grid.delta, fine.fine_delta);
    if (ratio < 1)
        throw ResolutionMismatch("fine step " + fine.fine_delta.str() +
                                 " does not divide grid step " + grid.delta.str());

    StepIncrements inc;
    inc.grid = grid;
    inc.db.resize(static_cast<std::size_t>(grid.M));
    inc.l1.resize(static_cast<std::size_t>(grid.M));
    inc.l2.resize(static_cast<std::size_t>(grid.M));
    const double dt = grid.dt();
    for (std::int64_t k = 0; k < grid.M; ++k) {
        // Ascending-index bin sum; exact thanks to increment quantization.
        double db = 0.0;
        const std::int64_t base = k * ratio;
        for (std::int64_t j = 0; j < ratio; ++j)
            db += fine.increments[static_cast<std::size_t>(base + j)];
        inc.db[static_cast<std::size_t>(k)] = db;
        inc.l1[static_cast<std::size_t>(k)] = (db * db - dt) / 2.0;
        inc.l2[static_cast<std::size_t>(k)] = compute_l2(fine, grid, k);
    }
    return inc;
}

double compute_l2(const FineBrownianPath& fine, const GridSpec& grid, std::int64_t k) {
    if (k < 0 || k >= grid.M) throw OutOfRange("step index out of range");
    const std::int64_t ratio = Rational::exact_quotient(grid.delta, fine.fine_delta);
    if (ratio < 1) throw ResolutionMismatch("fine step does not divide grid step");

    const std::int64_t base = k * ratio;
    const std::int64_t delayed = base - grid.m * ratio;  // fine index of t_k - tau
    const double b_delay_start = fine.value_at(delayed);
    double sum = 0.0;
    for (std::int64_t j = 0; j < ratio; ++j) {
        const double delayed_gain = fine.value_at(delayed + j) - b_delay_start;
        sum += delayed_gain * fine.increments[static_cast<std::size_t>(base + j)];
    }
    return sum;
}

}  // namespace nsdde
