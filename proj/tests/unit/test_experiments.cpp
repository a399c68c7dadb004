#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nsdde/cli_io.hpp"
#include "nsdde/errors.hpp"
#include "nsdde/experiments.hpp"

using namespace nsdde;

namespace {

NsddeProblem zero_coefficient_problem() {
    auto problem = builtin_problem("linear-sdde");
    problem.name = "zero";
    auto zero2 = [](std::span<const double>, std::span<const double>, std::span<double> out) {
        out[0] = 0.0;
    };
    problem.coeffs.neutral = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    problem.coeffs.drift = zero2;
    problem.coeffs.diffusion = zero2;
    problem.coeffs.diffusion_dx_diffusion = zero2;
    problem.coeffs.diffusion_dy_diffusion = [](std::span<const double>, std::span<const double>,
                                               std::span<const double>, std::span<const double>,
                                               std::span<double> out) { out[0] = 0.0; };
    return problem;
}

}  // namespace

TEST_CASE("lp aggregation basics") {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const auto est = aggregate_lp(ones, 2.0);
    CHECK(est.value == 1.0);
    CHECK(est.stderr_ == 0.0);

    const std::vector<double> zeros{0.0, 0.0};
    CHECK(aggregate_lp(zeros, 2.0).value == 0.0);
}

TEST_CASE("lp aggregation is exactly homogeneous under dyadic scaling") {
    std::vector<double> samples{0.3, 1.7, 0.05, 2.25, 0.9, 1.1, 0.61};
    std::vector<double> doubled(samples);
    for (double& s : doubled) s *= 2.0;
    const auto base = aggregate_lp(samples, 2.0);
    const auto scaled = aggregate_lp(doubled, 2.0);
    CHECK(scaled.value == 2.0 * base.value);
    CHECK(scaled.stderr_ == 2.0 * base.stderr_);
}

TEST_CASE("order estimation on exact power laws") {
    ConvergenceReport report;
    auto push = [&](double dt, double error) {
        ConvergenceRow row;
        row.scheme = SchemeKind::TamedMilstein;
        row.dt = dt;
        row.error = error;
        report.rows.push_back(row);
    };

    SUBCASE("proportional errors give slope one") {
        push(0.25, 0.25);
        push(0.125, 0.125);
        CHECK(estimate_order(report, SchemeKind::TamedMilstein) == doctest::Approx(1.0));
    }
    SUBCASE("square-root errors give slope one half") {
        for (double dt : {0.25, 0.125, 0.0625}) push(dt, std::sqrt(dt));
        CHECK(estimate_order(report, SchemeKind::TamedMilstein) == doctest::Approx(0.5));
    }
    SUBCASE("fewer than two usable rows is degenerate") {
        push(0.25, 0.0);
        push(0.125, 0.1);
        CHECK_THROWS_AS(estimate_order(report, SchemeKind::TamedMilstein), DegenerateFit);
        CHECK_THROWS_AS(estimate_order(report, SchemeKind::EulerMaruyama), DegenerateFit);
    }
}

TEST_CASE("self-comparison against the reference has exactly zero error") {
    const auto problem = builtin_problem("linear-sdde");
    const auto report = run_strong_convergence(problem, {SchemeKind::TamedMilstein}, {4, 6}, 6, 20,
                                               2.0, 0.5, 42, 1);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].error > 0.0);       // coarse grid differs from the reference
    CHECK(report.rows[1].error == 0.0);      // the reference row is a self-comparison
    CHECK(report.rows[1].stderr_ == 0.0);
    CHECK(report.rows[1].exploded_fraction == 0.0);
}

TEST_CASE("zero-coefficient problem has zero error at every step size") {
    const auto problem = zero_coefficient_problem();
    const auto report = run_strong_convergence(problem, {SchemeKind::TamedMilstein,
                                                         SchemeKind::EulerMaruyama},
                                               {3, 4, 5}, 7, 10, 2.0, 0.5, 1, 1);
    for (const auto& row : report.rows) CHECK(row.error == 0.0);
}

TEST_CASE("convergence run validates its inputs") {
    const auto problem = builtin_problem("linear-sdde");
    CHECK_THROWS_AS(run_strong_convergence(problem, {SchemeKind::TamedMilstein}, {3}, 6, 1, 2.0,
                                           0.5, 1, 1),
                    InsufficientPaths);
    CHECK_THROWS_AS(run_strong_convergence(problem, {SchemeKind::TamedMilstein}, {8}, 6, 10, 2.0,
                                           0.5, 1, 1),
                    GridMismatch);
}

TEST_CASE("worker count never changes the report") {
    const auto problem = builtin_problem("cubic-tamed");
    const auto serial = run_strong_convergence(problem, {SchemeKind::TamedMilstein,
                                                         SchemeKind::TamedEulerMaruyama},
                                               {3, 4}, 7, 40, 2.0, 0.5, 9, 1);
    const auto threaded = run_strong_convergence(problem, {SchemeKind::TamedMilstein,
                                                           SchemeKind::TamedEulerMaruyama},
                                                 {3, 4}, 7, 40, 2.0, 0.5, 9, 4);
    std::ostringstream a, b;
    write_convergence_csv(serial, a);
    write_convergence_csv(threaded, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("errors shrink with the step on the linear problem") {
    const auto problem = builtin_problem("linear-sdde");
    const auto report = run_strong_convergence(problem, {SchemeKind::TamedMilstein}, {3, 5}, 8,
                                               200, 2.0, 0.5, 7, 0);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].exploded_fraction == 0.0);
    CHECK(report.rows[1].error < report.rows[0].error);
}

TEST_CASE("sup moment of the constant problem is exactly one") {
    const auto problem = zero_coefficient_problem();
    const auto report = estimate_sup_moment(problem, SchemeKind::TamedMilstein, 3, 6, 25, 4.0,
                                            0.5, 3, 1);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].sup_moment == 1.0);  // xi(0) = 1 and nothing moves
    CHECK(report.rows[0].stderr_ == 0.0);
    CHECK(report.rows[0].exploded_fraction == 0.0);
}

TEST_CASE("exit probabilities at trivial radii") {
    SUBCASE("radii below the initial value are certain exits") {
        const auto problem = builtin_problem("cubic-tamed");  // |xi(0)| = 1
        const auto report = estimate_exit_probability(problem, SchemeKind::TamedMilstein, 3, 6,
                                                      50, {0.5, 20000.0}, 0.5, 4, 1);
        REQUIRE(report.rows.size() == 4);
        CHECK(report.rows[0].which == "tau_R");
        CHECK(report.rows[0].prob == 1.0);
        CHECK(report.rows[0].scaled == 0.25);
        CHECK(report.rows[1].prob == 0.0);  // nothing reaches radius 2e4
        CHECK(report.rows[2].which == "rho_R");
        CHECK(report.rows[2].prob == 1.0);
    }
    SUBCASE("constant problem never exits beyond its start") {
        const auto problem = zero_coefficient_problem();
        const auto report = estimate_exit_probability(problem, SchemeKind::TamedMilstein, 3, 6,
                                                      20, {2.0, 4.0}, 0.5, 4, 1);
        for (const auto& row : report.rows) CHECK(row.prob == 0.0);
    }
    SUBCASE("radii must ascend") {
        const auto problem = builtin_problem("cubic-tamed");
        CHECK_THROWS_AS(estimate_exit_probability(problem, SchemeKind::TamedMilstein, 3, 6, 10,
                                                  {4.0, 2.0}, 0.5, 4, 1),
                        ConstraintViolation);
    }
}

TEST_CASE("interpolation gap of the constant problem is zero") {
    const auto problem = zero_coefficient_problem();
    const auto report = estimate_interpolation_gap(problem, 3, 6, 15, 2.0, 0.5, 5, 1);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].gap == 0.0);
    CHECK(report.rows[0].stderr_ == 0.0);
}

TEST_CASE("drift-only interpolation gap obeys the deterministic bound") {
    // With bounded drift |b| <= 1 and no diffusion the within-step motion is
    // at most dt * |b_h|, so the gap (at p = 2) is bounded by dt^(2(1-alpha)).
    auto problem = zero_coefficient_problem();
    problem.coeffs.drift = [](std::span<const double> x, std::span<const double> y,
                              std::span<double> out) { out[0] = std::cos(x[0] + y[0]); };
    const int m_exponent = 4;
    const double dt = 1.0 / 16.0;
    const double alpha = 0.5;
    const auto report = estimate_interpolation_gap(problem, m_exponent, 8, 10, 2.0, alpha, 6, 1);
    CHECK(report.rows[0].gap > 0.0);
    CHECK(report.rows[0].gap <= std::pow(dt, 2.0 * (1.0 - alpha)));
}

TEST_CASE("interpolation gap shrinks as the grid refines") {
    const auto problem = builtin_problem("linear-sdde");
    const auto coarse = estimate_interpolation_gap(problem, 4, 10, 300, 2.0, 0.5, 12, 0);
    const auto fine = estimate_interpolation_gap(problem, 6, 10, 300, 2.0, 0.5, 12, 0);
    CHECK(fine.rows[0].gap < coarse.rows[0].gap);
}
