#include <cmath>
#include <vector>

#include "doctest.h"
#include "nsdde/brownian.hpp"
#include "nsdde/errors.hpp"

using namespace nsdde;

namespace {

const Rational kTau(1);
const Rational kHorizon(4);

FineBrownianPath path_from_increments(std::vector<double> inc, const Rational& fine_delta) {
    FineBrownianPath path;
    path.fine_delta = fine_delta;
    path.horizon = kHorizon;
    path.steps = static_cast<std::int64_t>(inc.size());
    path.increments = std::move(inc);
    path.values.assign(path.increments.size() + 1, 0.0);
    for (std::size_t j = 0; j < path.increments.size(); ++j)
        path.values[j + 1] = path.values[j] + path.increments[j];
    return path;
}

}  // namespace

TEST_CASE("same (seed, path_index) regenerates bit-identical increments") {
    const auto a = sample_fine_path(42, 7, kHorizon, Rational(1, 1024));
    const auto b = sample_fine_path(42, 7, kHorizon, Rational(1, 1024));
    REQUIRE(a.increments.size() == b.increments.size());
    CHECK(a.increments == b.increments);

    const auto c = sample_fine_path(42, 8, kHorizon, Rational(1, 1024));
    CHECK(a.increments != c.increments);
}

TEST_CASE("fine step must divide the horizon") {
    CHECK_THROWS_AS(sample_fine_path(1, 0, Rational(33, 10), Rational(1, 8)), BadStep);
}

TEST_CASE("pooled increment variance matches the step size") {
    const double delta = 1.0 / 1024.0;
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t n = 0;
    for (std::uint64_t path_index = 0; n < 100000; ++path_index) {
        const auto path = sample_fine_path(2024, path_index, kHorizon, Rational(1, 1024));
        for (double inc : path.increments) {
            sum += inc;
            sum_sq += inc * inc;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double variance = sum_sq / static_cast<double>(n) - mean * mean;
    // stderr of a gaussian sample variance: delta * sqrt(2/n)
    const double tol = 3.0 * delta * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(variance - delta) <= tol);
}

TEST_CASE("increments from distinct streams are uncorrelated") {
    const std::int64_t pairs = 100000;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    std::int64_t n = 0;
    for (std::uint64_t k = 0; n < pairs; ++k) {
        const auto pa = sample_fine_path(5, 2 * k + 1, kHorizon, Rational(1, 1024));
        const auto pb = sample_fine_path(5, 2 * k + 2, kHorizon, Rational(1, 1024));
        for (std::size_t j = 0; j < pa.increments.size() && n < pairs; ++j, ++n) {
            sxy += pa.increments[j] * pb.increments[j];
            sxx += pa.increments[j] * pa.increments[j];
            syy += pb.increments[j] * pb.increments[j];
        }
    }
    const double corr = sxy / std::sqrt(sxx * syy);
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(pairs)));
}

TEST_CASE("coarsening at refinement ratio one is the identity") {
    const auto fine = sample_fine_path(3, 0, kHorizon, Rational(1, 32));
    const GridSpec grid = build_grid(kTau, kHorizon, 32);
    const auto inc = coarsen_increments(fine, grid);
    for (std::int64_t k = 0; k < grid.M; ++k)
        CHECK(inc.db[static_cast<std::size_t>(k)] ==
              fine.increments[static_cast<std::size_t>(k)]);
}

TEST_CASE("bin sums reproduce the terminal value bit-exactly") {
    const auto fine = sample_fine_path(11, 4, kHorizon, Rational(1, 2048));
    for (std::int64_t m : {2, 8, 64, 512}) {
        const GridSpec grid = build_grid(kTau, kHorizon, m);
        const auto inc = coarsen_increments(fine, grid);
        double total = 0.0;
        for (double db : inc.db) total += db;
        CHECK(total == fine.values.back());
    }
}

TEST_CASE("coupling exactness across dyadic grid pairs") {
    for (std::uint64_t path_index : {0u, 1u, 2u}) {
        const auto fine = sample_fine_path(99, path_index, kHorizon, Rational(1, 1024));
        for (int e : {3, 5, 7}) {
            const GridSpec coarse = build_grid(kTau, kHorizon, std::int64_t{1} << e);
            const GridSpec finer = build_grid(kTau, kHorizon, std::int64_t{1} << (e + 1));
            const auto inc_c = coarsen_increments(fine, coarse);
            const auto inc_f = coarsen_increments(fine, finer);
            for (std::int64_t k = 0; k < coarse.M; ++k)
                CHECK(inc_c.db[static_cast<std::size_t>(k)] ==
                      inc_f.db[static_cast<std::size_t>(2 * k)] +
                          inc_f.db[static_cast<std::size_t>(2 * k + 1)]);
        }
    }
}

TEST_CASE("coarsening validates resolution and horizon") {
    const auto fine = sample_fine_path(1, 0, kHorizon, Rational(1, 24));
    CHECK_THROWS_AS(coarsen_increments(fine, build_grid(kTau, kHorizon, 16)),
                    ResolutionMismatch);
    CHECK_THROWS_AS(coarsen_increments(fine, build_grid(kTau, Rational(2), 8)),
                    ResolutionMismatch);
}

TEST_CASE("l1 closed form") {
    // A zero bin increment gives l1 = -dt/2.
    const GridSpec grid = build_grid(kTau, kHorizon, 8);
    auto fine = path_from_increments(std::vector<double>(512, 0.0), Rational(1, 128));
    const auto inc = coarsen_increments(fine, grid);
    for (double l1 : inc.l1) CHECK(l1 == -grid.dt() / 2.0);
}

TEST_CASE("l2 vanishes while the delayed window has no noise") {
    const auto fine = sample_fine_path(17, 3, kHorizon, Rational(1, 512));
    const GridSpec grid = build_grid(kTau, kHorizon, 8);
    for (std::int64_t k = 0; k < grid.m; ++k) CHECK(compute_l2(fine, grid, k) == 0.0);
    // Beyond the delay the integral is generically nonzero.
    double beyond = 0.0;
    for (std::int64_t k = grid.m; k < grid.M; ++k) beyond += std::abs(compute_l2(fine, grid, k));
    CHECK(beyond > 0.0);
}

TEST_CASE("l2 at refinement ratio one reduces to an empty inner window") {
    const auto fine = sample_fine_path(17, 3, kHorizon, Rational(1, 16));
    const GridSpec grid = build_grid(kTau, kHorizon, 16);
    for (std::int64_t k = 0; k < grid.M; ++k) CHECK(compute_l2(fine, grid, k) == 0.0);
}

TEST_CASE("sub-grid iterated sum matches its algebraic identity") {
    // sum_j (B_j - B_0) a_j == (dB^2 - sum_j a_j^2) / 2 for each bin.
    const auto fine = sample_fine_path(23, 5, kHorizon, Rational(1, 1024));
    const GridSpec grid = build_grid(kTau, kHorizon, 16);
    const std::int64_t ratio = 64;
    const auto inc = coarsen_increments(fine, grid);
    for (std::int64_t k = 0; k < grid.M; ++k) {
        const std::int64_t base = k * ratio;
        double ito = 0.0, sq = 0.0;
        for (std::int64_t j = 0; j < ratio; ++j) {
            const double a = fine.increments[static_cast<std::size_t>(base + j)];
            ito += (fine.values[static_cast<std::size_t>(base + j)] -
                    fine.values[static_cast<std::size_t>(base)]) *
                   a;
            sq += a * a;
        }
        const double db = inc.db[static_cast<std::size_t>(k)];
        CHECK(ito == doctest::Approx((db * db - sq) / 2.0).epsilon(1e-10));
    }
}

TEST_CASE("sub-grid l1 sum converges to the closed form as the fine step shrinks") {
    // The mean-square gap to the exact l1 is (expected) dt*delta/2, so halving
    // delta should halve it.
    const GridSpec grid = build_grid(kTau, kHorizon, 8);
    auto mean_sq_gap = [&](std::int64_t den) {
        const std::int64_t ratio = den / 8;
        double total = 0.0;
        std::int64_t count = 0;
        for (std::uint64_t path_index = 0; path_index < 64; ++path_index) {
            const auto fine = sample_fine_path(31, path_index, kHorizon, Rational(1, den));
            const auto inc = coarsen_increments(fine, grid);
            for (std::int64_t k = 0; k < grid.M; ++k) {
                const std::int64_t base = k * ratio;
                double ito = 0.0;
                for (std::int64_t j = 0; j < ratio; ++j)
                    ito += (fine.values[static_cast<std::size_t>(base + j)] -
                            fine.values[static_cast<std::size_t>(base)]) *
                           fine.increments[static_cast<std::size_t>(base + j)];
                const double gap = ito - inc.l1[static_cast<std::size_t>(k)];
                total += gap * gap;
                ++count;
            }
        }
        return total / static_cast<double>(count);
    };
    const double coarse_gap = mean_sq_gap(64);
    const double fine_gap = mean_sq_gap(128);
    CHECK(fine_gap < 0.75 * coarse_gap);
}

TEST_CASE("delayed iterated integral moments") {
    // E[l2] = 0 and E[l2^2] = dt^2/2 (Ito isometry over one step), checked on
    // a modest sample; the acceptance suite runs the full-size version.
    const GridSpec grid = build_grid(kTau, kHorizon, 16);
    const double dt = grid.dt();
    double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
    std::int64_t n = 0;
    for (std::uint64_t path_index = 0; path_index < 500; ++path_index) {
        const auto fine = sample_fine_path(77, path_index, kHorizon, Rational(1, 4096));
        for (std::int64_t k = grid.m; k < grid.M; ++k) {
            const double l2 = compute_l2(fine, grid, k);
            sum += l2;
            sum_sq += l2 * l2;
            sum_4 += l2 * l2 * l2 * l2;
            ++n;
        }
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double mean_sq = sum_sq / nn;
    const double se_mean = std::sqrt((mean_sq - mean * mean) / nn);
    const double var_sq = sum_4 / nn - mean_sq * mean_sq;
    const double se_sq = std::sqrt(var_sq / nn);
    CHECK(std::abs(mean) <= 3.0 * se_mean);
    CHECK(std::abs(mean_sq - dt * dt / 2.0) <= 3.0 * se_sq);
}
