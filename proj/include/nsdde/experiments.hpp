#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nsdde/problem.hpp"
#include "nsdde/schemes.hpp"

namespace nsdde {

/// Strong-error table row: error estimates (E[sup_k |x_ref - Y|^p])^{1/p}
/// against the fine-grid reference driven by the same noise.
struct ConvergenceRow {
    SchemeKind scheme = SchemeKind::TamedMilstein;
    int m_exponent = 0;   // dt = tau / 2^e
    double dt = 0.0;
    std::int64_t paths = 0;
    double p = 2.0;
    double error = 0.0;
    double stderr_ = 0.0;
    double exploded_fraction = 0.0;
    bool unreliable() const { return exploded_fraction > 0.0; }
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::map<SchemeKind, double> slopes;  // fitted log-log slope per scheme (NaN if degenerate)
};

struct MomentRow {
    SchemeKind scheme = SchemeKind::TamedMilstein;
    double dt = 0.0;
    double p = 2.0;
    double sup_moment = 0.0;  // estimate of E[max_k |Y_k|^p]
    double stderr_ = 0.0;
    double exploded_fraction = 0.0;
};

struct MomentReport {
    std::vector<MomentRow> rows;
};

struct ExitRow {
    std::string which;   // "tau_R" (reference trajectory) or "rho_R" (scheme trajectory)
    double radius = 0.0;
    double prob = 0.0;   // fraction of paths with sup_k |Y_k| >= radius
    double scaled = 0.0; // radius^2 * prob
};

struct ExitReport {
    std::vector<ExitRow> rows;
};

struct GapRow {
    double dt = 0.0;
    double p = 2.0;
    double gap = 0.0;  // estimate of E[max_k sup-within-step |y(t) - Y_k|^p]
    double stderr_ = 0.0;
};

struct GapReport {
    std::vector<GapRow> rows;
};

/// (mean of samples^p)^{1/p} with a delta-method standard error. The p-th
/// power uses exact squaring when p == 2 so the estimator is exactly
/// |c|-homogeneous under dyadic rescaling of the samples.
struct LpSupEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};
LpSupEstimate aggregate_lp(std::span<const double> sup_samples, double p);

double pow_p(double x, double p);

/// Runs `body(path_index)` for every path on a worker pool. Results must be
/// written to per-path slots; reductions happen afterwards in index order so
/// the worker count never changes output bits.
void for_each_path(std::int64_t paths, int threads, const std::function<void(std::int64_t)>& body);

/// Coupled strong-error experiment (one fine path per path index drives the
/// reference and every coarse grid). m_exponents may include ref_exponent,
/// in which case that row is an exact self-comparison with zero error.
ConvergenceReport run_strong_convergence(const NsddeProblem& problem,
                                         const std::vector<SchemeKind>& schemes,
                                         const std::vector<int>& m_exponents, int ref_exponent,
                                         std::int64_t paths, double p, double alpha,
                                         std::uint64_t seed, int threads = 0);

/// Least-squares slope of log(error) against log(dt) for one scheme.
/// Throws DegenerateFit with fewer than two usable (nonzero-error) rows.
double estimate_order(const ConvergenceReport& report, SchemeKind scheme);

MomentReport estimate_sup_moment(const NsddeProblem& problem, SchemeKind scheme, int m_exponent,
                                 int ref_exponent, std::int64_t paths, double p, double alpha,
                                 std::uint64_t seed, int threads = 0);

/// Gap between the continuous-form interpolant (frozen coarse coefficients,
/// fine-grid noise) and the step process, maximized within and across steps.
GapReport estimate_interpolation_gap(const NsddeProblem& problem, int m_exponent,
                                     int ref_exponent, std::int64_t paths, double p, double alpha,
                                     std::uint64_t seed, int threads = 0);

/// Exit probabilities P(sup_k |Y_k| >= R) for the fine reference ("tau_R")
/// and the coarse scheme trajectory ("rho_R"), coupled on the same noise.
ExitReport estimate_exit_probability(const NsddeProblem& problem, SchemeKind scheme,
                                     int m_exponent, int ref_exponent, std::int64_t paths,
                                     const std::vector<double>& radii, double alpha,
                                     std::uint64_t seed, int threads = 0);

}  // namespace nsdde
