#include "nsdde/assumptions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "nsdde/errors.hpp"
#include "nsdde/rng.hpp"
#include "nsdde/taming.hpp"

namespace nsdde {

namespace {

constexpr double kPairScales[2] = {1e-3, 1e-1};

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_of(const std::vector<double>& v) { return euclidean_norm(v); }

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

BallSampler::BallSampler(int dim, std::uint64_t seed)
    : dim_(dim), seed_(seed), direction_stream_(seed, 0x8A11u), radial_stream_(seed, 0xBA11u) {}

void BallSampler::extend(double radius, std::int64_t count) {
    radius_ = std::max(radius_, radius);
    if (points_.empty()) points_.push_back(std::vector<double>(static_cast<std::size_t>(dim_), 0.0));
    // Axis points of the current rung (degenerate / symmetry probes).
    for (int axis = 0; axis < dim_; ++axis) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> p(static_cast<std::size_t>(dim_), 0.0);
            p[static_cast<std::size_t>(axis)] = sign * radius;
            points_.push_back(std::move(p));
        }
    }
    // Uniform draws in the Euclidean ball: gaussian direction, radial factor
    // U^(1/dim). The streams continue across rungs so ladders extend the set.
    for (std::int64_t c = 0; c < count; ++c) {
        std::vector<double> p(static_cast<std::size_t>(dim_), 0.0);
        double norm_sq = 0.0;
        for (int i = 0; i < dim_; ++i) {
            p[static_cast<std::size_t>(i)] = direction_stream_.next();
            norm_sq += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        }
        const double norm = std::sqrt(norm_sq);
        const double radial =
            radius * std::pow(radial_stream_.next_unit(), 1.0 / static_cast<double>(dim_));
        const double scale = norm > 0.0 ? radial / norm : 0.0;
        for (double& c2 : p) c2 *= scale;
        points_.push_back(std::move(p));
    }
}

std::vector<double> BallSampler::perturbed(std::size_t i, double scale, int axis_or_minus1) const {
    const std::vector<double>& point = points_[i];
    std::vector<double> dir(static_cast<std::size_t>(dim_), 0.0);
    if (axis_or_minus1 >= 0) {
        dir[static_cast<std::size_t>(axis_or_minus1)] = 1.0;
    } else {
        NormalStream gauss(seed_ ^ std::bit_cast<std::uint64_t>(scale), 0xD125u + i);
        double norm_sq = 0.0;
        for (int c = 0; c < dim_; ++c) {
            dir[static_cast<std::size_t>(c)] = gauss.next();
            norm_sq += dir[static_cast<std::size_t>(c)] * dir[static_cast<std::size_t>(c)];
        }
        const double norm = std::sqrt(norm_sq);
        if (norm > 0.0)
            for (double& c : dir) c /= norm;
        else
            dir[0] = 1.0;
    }
    // Step inward at the boundary so the companion stays in the ball.
    const double sign = dot(point, dir) > 0.0 ? -1.0 : 1.0;
    std::vector<double> companion(point);
    for (int c = 0; c < dim_; ++c)
        companion[static_cast<std::size_t>(c)] += sign * scale * dir[static_cast<std::size_t>(c)];
    const double norm = norm_of(companion);
    if (norm > radius_)
        for (double& c : companion) c *= radius_ / norm;
    return companion;
}

namespace {

/// Difference pairs: consecutive draws plus random and axis-aligned
/// perturbations at the two probe scales.
void visit_difference_pairs(
    const BallSampler& sampler,
    const std::function<void(std::span<const double>, std::span<const double>)>& fn) {
    const auto& pts = sampler.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) fn(pts[i], pts[i + 1]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double scale : kPairScales) {
            const auto random_dir = sampler.perturbed(i, scale, -1);
            fn(pts[i], random_dir);
            for (int axis = 0; axis < sampler.dim(); ++axis) {
                const auto along_axis = sampler.perturbed(i, scale, axis);
                fn(pts[i], along_axis);
            }
        }
    }
}

}  // namespace

/// Evaluation pairs (x, y) for pointwise conditions: consecutive draws, the
/// diagonal, and pairs against the origin. All three families are stable
/// under extension of the point set.
static void visit_eval_pairs(
    const BallSampler& sampler,
    const std::function<void(std::span<const double>, std::span<const double>)>& fn) {
    const auto& pts = sampler.points();
    if (pts.empty()) return;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) fn(pts[i], pts[i + 1]);
    for (std::size_t i = 0; i < pts.size(); ++i) fn(pts[i], pts[i]);
    for (std::size_t i = 0; i < pts.size(); ++i) fn(pts[i], pts[0]);
}

ContractionEstimate check_contraction(const CoefficientSet& coeffs, int dim, double radius,
                                      std::int64_t samples, std::uint64_t seed) {
    BallSampler sampler(dim, seed);
    sampler.extend(radius, samples);

    std::vector<double> dx(static_cast<std::size_t>(dim)), dy(static_cast<std::size_t>(dim));
    ContractionEstimate est;
    visit_difference_pairs(sampler, [&](std::span<const double> a, std::span<const double> b) {
        const double gap = distance(a, b);
        if (gap == 0.0) return;
        coeffs.neutral(a, dx);
        coeffs.neutral(b, dy);
        est.kappa_hat = std::max(est.kappa_hat, distance(dx, dy) / gap);
    });

    std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> at_origin(static_cast<std::size_t>(dim), 0.0);
    coeffs.neutral(origin, at_origin);
    est.pass = est.kappa_hat < 1.0 && euclidean_norm(at_origin) == 0.0;
    return est;
}

LipschitzEstimate check_local_lipschitz(const CoefficientSet& coeffs, int dim, double radius,
                                        std::int64_t samples, std::uint64_t seed) {
    BallSampler sampler(dim, seed);
    sampler.extend(radius, samples);
    const auto& pts = sampler.points();

    LipschitzEstimate est;
    const std::size_t n = static_cast<std::size_t>(dim);
    std::vector<double> f0(n), f1(n), g0(n), g1(n);

    auto quad = [&](std::span<const double> x, std::span<const double> y,
                    std::span<const double> xb, std::span<const double> yb) {
        const double gap = distance(x, xb) + distance(y, yb);
        if (gap == 0.0) return;
        coeffs.drift(x, y, f0);
        coeffs.drift(xb, yb, f1);
        coeffs.diffusion(x, y, g0);
        coeffs.diffusion(xb, yb, g1);
        est.K_R_hat = std::max(est.K_R_hat, std::max(distance(f0, f1), distance(g0, g1)) / gap);
        coeffs.diffusion_dx_diffusion(x, y, g0);
        coeffs.diffusion_dx_diffusion(xb, yb, g1);
        est.Kbar_R_hat = std::max(est.Kbar_R_hat, distance(g0, g1) / gap);
    };

    // Argument pairs from consecutive draws; counterparts from the next pair
    // and from perturbations of each slot separately and jointly.
    for (std::size_t i = 0; i + 3 < pts.size(); i += 2) quad(pts[i], pts[i + 1], pts[i + 2], pts[i + 3]);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (double scale : kPairScales) {
            for (int axis = -1; axis < sampler.dim(); ++axis) {
                const auto px = sampler.perturbed(i, scale, axis);
                const auto py = sampler.perturbed(i + 1, scale, axis);
                quad(pts[i], pts[i + 1], px, pts[i + 1]);
                quad(pts[i], pts[i + 1], pts[i], py);
                quad(pts[i], pts[i + 1], px, py);
            }
        }
    }

    // The delayed-derivative product as the scheme consumes it, with the
    // diffusion evaluated at the delayed argument pair: triples (x, y, z).
    auto sext = [&](std::span<const double> x, std::span<const double> y, std::span<const double> z,
                    std::span<const double> xb, std::span<const double> yb,
                    std::span<const double> zb) {
        const double gap = distance(x, xb) + distance(y, yb) + distance(z, zb);
        if (gap == 0.0) return;
        coeffs.diffusion_dy_diffusion(x, y, y, z, g0);
        coeffs.diffusion_dy_diffusion(xb, yb, yb, zb, g1);
        est.Kbar_R_hat = std::max(est.Kbar_R_hat, distance(g0, g1) / gap);
    };
    for (std::size_t i = 0; i + 5 < pts.size(); i += 3)
        sext(pts[i], pts[i + 1], pts[i + 2], pts[i + 3], pts[i + 4], pts[i + 5]);
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
        for (double scale : kPairScales) {
            const auto px = sampler.perturbed(i, scale, -1);
            const auto py = sampler.perturbed(i + 1, scale, -1);
            const auto pz = sampler.perturbed(i + 2, scale, -1);
            sext(pts[i], pts[i + 1], pts[i + 2], px, pts[i + 1], pts[i + 2]);
            sext(pts[i], pts[i + 1], pts[i + 2], pts[i], py, pts[i + 2]);
            sext(pts[i], pts[i + 1], pts[i + 2], pts[i], pts[i + 1], pz);
            sext(pts[i], pts[i + 1], pts[i + 2], px, py, pz);
        }
    }
    return est;
}

namespace {

double khasminskii_ratio(const CoefficientSet& coeffs, int dim, double p,
                         std::span<const double> x, std::span<const double> y,
                         std::vector<double>& bval, std::vector<double>& sval,
                         std::vector<double>& dval) {
    coeffs.drift(x, y, bval);
    coeffs.diffusion(x, y, sval);
    coeffs.neutral(y, dval);
    double inner = 0.0;
    for (int i = 0; i < dim; ++i)
        inner += (x[static_cast<std::size_t>(i)] - dval[static_cast<std::size_t>(i)]) *
                 bval[static_cast<std::size_t>(i)];
    const double sig_sq = dot(sval, sval);
    const double numer = inner + 0.5 * (p - 1.0) * sig_sq;
    const double denom = 1.0 + dot(x, x) + dot(y, y);
    return numer / denom;
}

KhasminskiiEstimate khasminskii_over(const BallSampler& sampler, const CoefficientSet& coeffs,
                                     int dim, double p) {
    const std::size_t n = static_cast<std::size_t>(dim);
    std::vector<double> bval(n), sval(n), dval(n);
    KhasminskiiEstimate est;
    est.K1_hat = 0.0;  // K1 > 0 covers any nonpositive ratio
    visit_eval_pairs(sampler, [&](std::span<const double> x, std::span<const double> y) {
        est.K1_hat = std::max(est.K1_hat, khasminskii_ratio(coeffs, dim, p, x, y, bval, sval, dval));
    });
    est.ok = std::isfinite(est.K1_hat);
    return est;
}

}  // namespace

KhasminskiiEstimate check_khasminskii(const CoefficientSet& coeffs, int dim, double p,
                                      double radius, std::int64_t samples, std::uint64_t seed) {
    BallSampler sampler(dim, seed);
    sampler.extend(radius, samples);
    return khasminskii_over(sampler, coeffs, dim, p);
}

std::vector<KhasminskiiEstimate> check_khasminskii_ladder(const CoefficientSet& coeffs, int dim,
                                                          double p,
                                                          const std::vector<double>& radii,
                                                          std::int64_t samples_per_radius,
                                                          std::uint64_t seed) {
    BallSampler sampler(dim, seed);
    std::vector<KhasminskiiEstimate> rungs;
    for (double radius : radii) {
        sampler.extend(radius, samples_per_radius);
        rungs.push_back(khasminskii_over(sampler, coeffs, dim, p));
    }
    return rungs;
}

std::vector<AssumptionWitness> khasminskii_violations(const CoefficientSet& coeffs, int dim,
                                                      double p, double declared_K1, double radius,
                                                      std::int64_t samples, std::uint64_t seed) {
    BallSampler sampler(dim, seed);
    sampler.extend(radius, samples);
    const std::size_t n = static_cast<std::size_t>(dim);
    std::vector<double> bval(n), sval(n), dval(n);
    std::vector<AssumptionWitness> witnesses;
    visit_eval_pairs(sampler, [&](std::span<const double> x, std::span<const double> y) {
        const double ratio = khasminskii_ratio(coeffs, dim, p, x, y, bval, sval, dval);
        if (ratio > declared_K1) {
            AssumptionWitness w;
            w.rule = "khasminskii";
            w.x.assign(x.begin(), x.end());
            w.y.assign(y.begin(), y.end());
            w.lhs = ratio;
            w.rhs = declared_K1;
            witnesses.push_back(std::move(w));
        }
    });
    return witnesses;
}

std::vector<TamingGapRow> check_taming_gap(const CoefficientSet& coeffs, int dim, double radius,
                                           const std::vector<double>& dt_list, double alpha,
                                           std::int64_t samples, std::uint64_t seed) {
    if (dt_list.empty()) throw ConstraintViolation("taming gap check needs at least one step size");
    BallSampler sampler(dim, seed);
    sampler.extend(radius, samples);

    // |b - b_h| is increasing in |b|, so one pass collecting the largest
    // drift norm gives the per-step maxima exactly.
    const std::size_t n = static_cast<std::size_t>(dim);
    std::vector<double> bval(n);
    double max_drift_norm = 0.0;
    visit_eval_pairs(sampler, [&](std::span<const double> x, std::span<const double> y) {
        coeffs.drift(x, y, bval);
        max_drift_norm = std::max(max_drift_norm, euclidean_norm(bval));
    });

    std::vector<TamingGapRow> rows;
    for (double dt : dt_list) {
        TamingGapRow row;
        row.dt = dt;
        row.gap = taming_gap_norm(max_drift_norm, dt, alpha);
        row.n_r_hat = row.gap / dt;
        row.n_r_alpha_hat = row.gap / std::pow(dt, alpha);
        rows.push_back(row);
    }
    return rows;
}

AssumptionReport run_assumption_checks(const NsddeProblem& problem, double radius,
                                       std::int64_t samples, const std::vector<double>& dt_list,
                                       double alpha, std::uint64_t seed) {
    AssumptionReport report;
    report.radius = radius;
    report.samples = samples;
    report.contraction = check_contraction(problem.coeffs, problem.dim, radius, samples, seed);
    report.lipschitz = check_local_lipschitz(problem.coeffs, problem.dim, radius, samples, seed);
    report.khasminskii =
        check_khasminskii(problem.coeffs, problem.dim, problem.khasminskii_p, radius, samples, seed);
    report.khasminskii.violations = khasminskii_violations(
        problem.coeffs, problem.dim, problem.khasminskii_p, problem.khasminskii_K1, radius,
        samples, seed);
    report.taming_gap =
        check_taming_gap(problem.coeffs, problem.dim, radius, dt_list, alpha, samples, seed);
    return report;
}

}  // namespace nsdde
