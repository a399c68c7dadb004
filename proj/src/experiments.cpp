#include "nsdde/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "nsdde/errors.hpp"
#include "nsdde/taming.hpp"

namespace nsdde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Rational dyadic_step(const Rational& tau, int exponent) {
    return tau / Rational(std::int64_t{1} << exponent);
}

GridSpec dyadic_grid(const NsddeProblem& problem, int exponent) {
    return build_grid(problem.delay, problem.horizon, std::int64_t{1} << exponent);
}

double sup_norm_over_nodes(const Trajectory& traj) {
    double sup = 0.0;
    for (std::int64_t k = 0; k <= traj.last_step(); ++k)
        sup = std::max(sup, euclidean_norm(traj.at(k)));
    return sup;
}

/// Mean and standard error of a sample set, reduced in slot order.
struct MeanStats {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t used = 0;
};

MeanStats mean_of(const std::vector<double>& slots) {
    MeanStats stats;
    double sum = 0.0;
    for (double v : slots) {
        if (std::isnan(v)) continue;
        sum += v;
        ++stats.used;
    }
    if (stats.used == 0) {
        stats.mean = kNaN;
        stats.stderr_ = kNaN;
        return stats;
    }
    stats.mean = sum / static_cast<double>(stats.used);
    if (stats.used < 2) {
        stats.stderr_ = kNaN;
        return stats;
    }
    double sq = 0.0;
    for (double v : slots) {
        if (std::isnan(v)) continue;
        const double d = v - stats.mean;
        sq += d * d;
    }
    const double variance = sq / static_cast<double>(stats.used - 1);
    stats.stderr_ = std::sqrt(variance / static_cast<double>(stats.used));
    return stats;
}

}  // namespace

double pow_p(double x, double p) {
    if (p == 2.0) return x * x;
    if (p == 1.0) return x;
    return std::pow(x, p);
}

LpSupEstimate aggregate_lp(std::span<const double> sup_samples, double p) {
    std::vector<double> powered(sup_samples.size());
    for (std::size_t i = 0; i < sup_samples.size(); ++i) powered[i] = pow_p(sup_samples[i], p);
    const MeanStats stats = mean_of(powered);
    LpSupEstimate est;
    if (stats.used == 0) {
        est.value = kNaN;
        est.stderr_ = kNaN;
        return est;
    }
    if (stats.mean == 0.0) return {0.0, 0.0};
    if (p == 2.0) {
        est.value = std::sqrt(stats.mean);
        est.stderr_ = std::isnan(stats.stderr_) ? kNaN : stats.stderr_ / (2.0 * est.value);
        return est;
    }
    est.value = std::pow(stats.mean, 1.0 / p);
    est.stderr_ = std::isnan(stats.stderr_)
                      ? kNaN
                      : est.value * stats.stderr_ / (p * stats.mean);  // delta method
    return est;
}

void for_each_path(std::int64_t paths, int threads, const std::function<void(std::int64_t)>& body) {
    if (threads <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        threads = hc > 0 ? static_cast<int>(hc) : 1;
    }
    if (threads == 1 || paths <= 1) {
        for (std::int64_t i = 0; i < paths; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= paths) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

ConvergenceReport run_strong_convergence(const NsddeProblem& problem,
                                         const std::vector<SchemeKind>& schemes,
                                         const std::vector<int>& m_exponents, int ref_exponent,
                                         std::int64_t paths, double p, double alpha,
                                         std::uint64_t seed, int threads) {
    if (paths < 2) throw InsufficientPaths("strong convergence needs at least 2 paths");
    for (int e : m_exponents)
        if (e > ref_exponent)
            throw GridMismatch("coarse exponent " + std::to_string(e) +
                               " exceeds reference exponent " + std::to_string(ref_exponent));

    const GridSpec ref_grid = dyadic_grid(problem, ref_exponent);
    std::vector<GridSpec> grids;
    grids.reserve(m_exponents.size());
    for (int e : m_exponents) grids.push_back(dyadic_grid(problem, e));

    const std::size_t n_rows = schemes.size() * m_exponents.size();
    std::vector<std::vector<double>> sups(n_rows, std::vector<double>(static_cast<std::size_t>(paths), kNaN));

    const Rational fine_delta = dyadic_step(problem.delay, ref_exponent);
    for_each_path(paths, threads, [&](std::int64_t path) {
        const FineBrownianPath fine =
            sample_fine_path(seed, static_cast<std::uint64_t>(path), problem.horizon, fine_delta);
        const StepIncrements ref_inc = coarsen_increments(fine, ref_grid);
        const Trajectory reference =
            simulate_path(problem, ref_grid, ref_inc, SchemeKind::TamedMilstein, alpha);

        for (std::size_t ei = 0; ei < grids.size(); ++ei) {
            const GridSpec& grid = grids[ei];
            const StepIncrements inc = coarsen_increments(fine, grid);
            const std::int64_t ratio = std::int64_t{1} << (ref_exponent - m_exponents[ei]);
            for (std::size_t si = 0; si < schemes.size(); ++si) {
                const Trajectory traj = simulate_path(problem, grid, inc, schemes[si], alpha);
                const std::size_t row = si * grids.size() + ei;
                if (reference.exploded || traj.exploded) continue;  // slot stays NaN
                double sup = 0.0;
                for (std::int64_t k = 0; k <= grid.M; ++k) {
                    const auto ref_state = reference.at(k * ratio);
                    const auto state = traj.at(k);
                    double sq = 0.0;
                    for (std::size_t i = 0; i < state.size(); ++i) {
                        const double d = ref_state[i] - state[i];
                        sq += d * d;
                    }
                    sup = std::max(sup, std::sqrt(sq));
                }
                sups[row][static_cast<std::size_t>(path)] = sup;
            }
        }
    });

    ConvergenceReport report;
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        for (std::size_t ei = 0; ei < grids.size(); ++ei) {
            const std::size_t row = si * grids.size() + ei;
            std::int64_t exploded = 0;
            for (double v : sups[row])
                if (std::isnan(v)) ++exploded;
            const LpSupEstimate est = aggregate_lp(sups[row], p);
            ConvergenceRow out;
            out.scheme = schemes[si];
            out.m_exponent = m_exponents[ei];
            out.dt = grids[ei].dt();
            out.paths = paths;
            out.p = p;
            out.error = est.value;
            out.stderr_ = est.stderr_;
            out.exploded_fraction = static_cast<double>(exploded) / static_cast<double>(paths);
            report.rows.push_back(out);
        }
    }
    for (SchemeKind scheme : schemes) {
        double slope = kNaN;
        try {
            slope = estimate_order(report, scheme);
        } catch (const DegenerateFit&) {
        }
        report.slopes[scheme] = slope;
    }
    return report;
}

double estimate_order(const ConvergenceReport& report, SchemeKind scheme) {
    std::vector<double> lx, ly;
    for (const auto& row : report.rows) {
        if (row.scheme != scheme) continue;
        if (!(row.error > 0.0) || std::isnan(row.error)) continue;
        lx.push_back(std::log(row.dt));
        ly.push_back(std::log(row.error));
    }
    if (lx.size() < 2) throw DegenerateFit("need at least two rows with nonzero error");
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) throw DegenerateFit("all rows share one step size");
    return sxy / sxx;
}

MomentReport estimate_sup_moment(const NsddeProblem& problem, SchemeKind scheme, int m_exponent,
                                 int ref_exponent, std::int64_t paths, double p, double alpha,
                                 std::uint64_t seed, int threads) {
    if (paths < 1) throw InsufficientPaths("moment estimate needs at least 1 path");
    const GridSpec grid = dyadic_grid(problem, m_exponent);
    const Rational fine_delta = dyadic_step(problem.delay, ref_exponent);

    std::vector<double> slots(static_cast<std::size_t>(paths), kNaN);
    for_each_path(paths, threads, [&](std::int64_t path) {
        const FineBrownianPath fine =
            sample_fine_path(seed, static_cast<std::uint64_t>(path), problem.horizon, fine_delta);
        const StepIncrements inc = coarsen_increments(fine, grid);
        const Trajectory traj = simulate_path(problem, grid, inc, scheme, alpha);
        if (traj.exploded) return;
        slots[static_cast<std::size_t>(path)] = pow_p(sup_norm_over_nodes(traj), p);
    });

    std::int64_t exploded = 0;
    for (double v : slots)
        if (std::isnan(v)) ++exploded;
    const MeanStats stats = mean_of(slots);

    MomentReport report;
    MomentRow row;
    row.scheme = scheme;
    row.dt = grid.dt();
    row.p = p;
    row.sup_moment = stats.mean;
    row.stderr_ = stats.used >= 2 ? stats.stderr_ : 0.0;
    row.exploded_fraction = static_cast<double>(exploded) / static_cast<double>(paths);
    report.rows.push_back(row);
    return report;
}

GapReport estimate_interpolation_gap(const NsddeProblem& problem, int m_exponent, int ref_exponent,
                                     std::int64_t paths, double p, double alpha,
                                     std::uint64_t seed, int threads) {
    if (ref_exponent <= m_exponent)
        throw GridMismatch("interpolation gap needs a strictly finer sub-grid");
    if (paths < 1) throw InsufficientPaths("gap estimate needs at least 1 path");

    const GridSpec grid = dyadic_grid(problem, m_exponent);
    const Rational fine_delta = dyadic_step(problem.delay, ref_exponent);
    const std::int64_t ratio = std::int64_t{1} << (ref_exponent - m_exponent);
    const int n = problem.dim;

    std::vector<double> slots(static_cast<std::size_t>(paths), kNaN);
    for_each_path(paths, threads, [&](std::int64_t path) {
        const FineBrownianPath fine =
            sample_fine_path(seed, static_cast<std::uint64_t>(path), problem.horizon, fine_delta);
        const StepIncrements inc = coarsen_increments(fine, grid);
        const Trajectory traj = simulate_path(problem, grid, inc, SchemeKind::TamedMilstein, alpha);
        if (traj.exploded) return;

        SchemeWorkspace ws(n);
        std::vector<double> point(static_cast<std::size_t>(n), 0.0);
        const double fine_dt = fine.fine_delta.value();
        double sup_gap = 0.0;
        for (std::int64_t k = 0; k < grid.M; ++k) {
            const auto y_cur = traj.at(k);
            const auto y_del = traj.at(k - grid.m);
            const auto y_del2 = traj.at(k - 2 * grid.m);
            problem.coeffs.drift(y_cur, y_del, ws.drift);
            tame_drift_inplace(ws.drift, grid.dt(), alpha);
            problem.coeffs.diffusion(y_cur, y_del, ws.diffusion);
            problem.coeffs.diffusion_dx_diffusion(y_cur, y_del, ws.dx_prod);
            problem.coeffs.diffusion_dy_diffusion(y_cur, y_del, y_del, y_del2, ws.dy_prod);

            const std::int64_t base = k * ratio;
            const std::int64_t delayed = base - grid.m * ratio;
            const double b_start = fine.values[static_cast<std::size_t>(base)];
            const double b_delay_start = fine.value_at(delayed);
            double iter_cur = 0.0;   // running Ito sum against the current window
            double iter_del = 0.0;   // running Ito sum against the delayed window
            for (std::int64_t j = 1; j <= ratio; ++j) {
                const double inc_prev = fine.increments[static_cast<std::size_t>(base + j - 1)];
                iter_cur += (fine.values[static_cast<std::size_t>(base + j - 1)] - b_start) * inc_prev;
                iter_del += (fine.value_at(delayed + j - 1) - b_delay_start) * inc_prev;
                const double window = fine.values[static_cast<std::size_t>(base + j)] - b_start;
                const double elapsed = static_cast<double>(j) * fine_dt;
                double sq = 0.0;
                for (int i = 0; i < n; ++i) {
                    point[static_cast<std::size_t>(i)] =
                        ws.drift[static_cast<std::size_t>(i)] * elapsed +
                        ws.diffusion[static_cast<std::size_t>(i)] * window +
                        ws.dx_prod[static_cast<std::size_t>(i)] * iter_cur +
                        ws.dy_prod[static_cast<std::size_t>(i)] * iter_del;
                    sq += point[static_cast<std::size_t>(i)] * point[static_cast<std::size_t>(i)];
                }
                sup_gap = std::max(sup_gap, std::sqrt(sq));
            }
        }
        slots[static_cast<std::size_t>(path)] = pow_p(sup_gap, p);
    });

    const MeanStats stats = mean_of(slots);
    GapReport report;
    GapRow row;
    row.dt = grid.dt();
    row.p = p;
    row.gap = stats.mean;
    row.stderr_ = stats.used >= 2 ? stats.stderr_ : 0.0;
    report.rows.push_back(row);
    return report;
}

ExitReport estimate_exit_probability(const NsddeProblem& problem, SchemeKind scheme,
                                     int m_exponent, int ref_exponent, std::int64_t paths,
                                     const std::vector<double>& radii, double alpha,
                                     std::uint64_t seed, int threads) {
    if (paths < 1) throw InsufficientPaths("exit probability needs at least 1 path");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i - 1] < radii[i]))
            throw ConstraintViolation("radii must be positive and strictly ascending");
    if (!radii.empty() && !(radii.front() > 0.0))
        throw ConstraintViolation("radii must be positive");

    const GridSpec grid = dyadic_grid(problem, m_exponent);
    const GridSpec ref_grid = dyadic_grid(problem, ref_exponent);
    const Rational fine_delta = dyadic_step(problem.delay, ref_exponent);

    std::vector<double> sup_ref(static_cast<std::size_t>(paths), 0.0);
    std::vector<double> sup_scheme(static_cast<std::size_t>(paths), 0.0);
    for_each_path(paths, threads, [&](std::int64_t path) {
        const FineBrownianPath fine =
            sample_fine_path(seed, static_cast<std::uint64_t>(path), problem.horizon, fine_delta);
        const StepIncrements ref_inc = coarsen_increments(fine, ref_grid);
        const Trajectory reference =
            simulate_path(problem, ref_grid, ref_inc, SchemeKind::TamedMilstein, alpha);
        const StepIncrements inc = coarsen_increments(fine, grid);
        const Trajectory traj = simulate_path(problem, grid, inc, scheme, alpha);
        // An exploded path crossed the overflow guard, hence every radius.
        sup_ref[static_cast<std::size_t>(path)] =
            reference.exploded ? kOverflowGuard : sup_norm_over_nodes(reference);
        sup_scheme[static_cast<std::size_t>(path)] =
            traj.exploded ? kOverflowGuard : sup_norm_over_nodes(traj);
    });

    ExitReport report;
    auto emit = [&](const std::string& which, const std::vector<double>& sups) {
        for (double radius : radii) {
            std::int64_t count = 0;
            for (double s : sups)
                if (s >= radius) ++count;
            ExitRow row;
            row.which = which;
            row.radius = radius;
            row.prob = static_cast<double>(count) / static_cast<double>(paths);
            row.scaled = radius * radius * row.prob;
            report.rows.push_back(row);
        }
    };
    emit("tau_R", sup_ref);
    emit("rho_R", sup_scheme);
    return report;
}

}  // namespace nsdde
