#include "nsdde/grid.hpp"

#include "nsdde/errors.hpp"

namespace nsdde {

GridSpec build_grid(const Rational& tau, const Rational& horizon, std::int64_t m) {
    if (!tau.positive() || !horizon.positive())
        throw GridMismatch("grid requires positive tau and T");
    if (m < 1) throw BadStep("m must be a positive integer");

    GridSpec grid;
    grid.delay = tau;
    grid.horizon = horizon;
    grid.delta = tau / Rational(m);
    grid.m = m;
    if (!(grid.delta < Rational(1)))
        throw BadStep("step " + grid.delta.str() + " must lie in (0, 1)");
    const std::int64_t M = Rational::exact_quotient(horizon, grid.delta);
    if (M < 0)
        throw GridMismatch("horizon " + horizon.str() + " is not an integer multiple of step " +
                           grid.delta.str());
    grid.M = M;
    return grid;
}

}  // namespace nsdde
