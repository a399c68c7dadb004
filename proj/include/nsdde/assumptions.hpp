#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsdde/problem.hpp"
#include "nsdde/rng.hpp"

namespace nsdde {

/// A sampled point at which one of the structural inequalities failed;
/// re-evaluating the stored point reproduces the violation.
struct AssumptionWitness {
    std::string rule;
    std::vector<double> x, y;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ContractionEstimate {
    double kappa_hat = 0.0;  // max |D(x)-D(y)| / |x-y| over sampled pairs
    bool pass = false;       // kappa_hat < 1 and D(0) = 0
};

struct LipschitzEstimate {
    double K_R_hat = 0.0;     // joint difference-quotient envelope of b and sigma
    double Kbar_R_hat = 0.0;  // same for the derivative-product coefficients
};

struct KhasminskiiEstimate {
    double K1_hat = 0.0;  // minimal constant covering all sampled points (clamped at 0)
    bool ok = false;
    std::vector<AssumptionWitness> violations;  // points exceeding a declared constant, if checked
};

struct TamingGapRow {
    double dt = 0.0;
    double gap = 0.0;          // max over samples of |b - b_h|
    double n_r_hat = 0.0;      // gap / dt
    double n_r_alpha_hat = 0.0;  // gap / dt^alpha
};

struct AssumptionReport {
    double radius = 0.0;
    std::int64_t samples = 0;
    ContractionEstimate contraction;
    LipschitzEstimate lipschitz;
    KhasminskiiEstimate khasminskii;
    std::vector<TamingGapRow> taming_gap;
};

/// Deterministic point battery for a ball of radius R: the origin, axis
/// points, uniform draws, plus pair perturbations at scales 1e-3 and 1e-1
/// (including axis-aligned ones). Growing the radius extends the set without
/// discarding earlier points, so estimates are monotone along a radius ladder.
class BallSampler {
  public:
    BallSampler(int dim, std::uint64_t seed);

    /// Extends the battery to `count` base points inside the ball of radius
    /// `radius` (per-coordinate bound, matching |x| v |y| <= R conditions).
    void extend(double radius, std::int64_t count);

    const std::vector<std::vector<double>>& points() const { return points_; }
    int dim() const { return dim_; }

    /// Perturbed companion of points()[i] at the given scale, kept inside the
    /// current ball (perturbations point inward at the boundary).
    std::vector<double> perturbed(std::size_t i, double scale, int axis_or_minus1) const;

  private:
    int dim_;
    std::uint64_t seed_;
    double radius_ = 0.0;
    NormalStream direction_stream_;
    Xoshiro256pp radial_stream_;
    std::vector<std::vector<double>> points_;
};

ContractionEstimate check_contraction(const CoefficientSet& coeffs, int dim, double radius,
                                      std::int64_t samples, std::uint64_t seed);

LipschitzEstimate check_local_lipschitz(const CoefficientSet& coeffs, int dim, double radius,
                                        std::int64_t samples, std::uint64_t seed);

/// K1_hat = max over sampled (x, y) of
///   [(x - D(y))^T b(x,y) + ((p-1)/2)|sigma(x,y)|^2] / (1 + |x|^2 + |y|^2),
/// clamped below at zero. Callers compare K1_hat across growing radii; a
/// value that keeps growing with R flags a violated growth condition.
KhasminskiiEstimate check_khasminskii(const CoefficientSet& coeffs, int dim, double p,
                                      double radius, std::int64_t samples, std::uint64_t seed);

/// Same estimate along a radius ladder with one nested, extended sample set.
std::vector<KhasminskiiEstimate> check_khasminskii_ladder(const CoefficientSet& coeffs, int dim,
                                                          double p,
                                                          const std::vector<double>& radii,
                                                          std::int64_t samples_per_radius,
                                                          std::uint64_t seed);

/// Sampled points whose growth ratio exceeds a declared constant; empty when
/// the declared constant covers the battery.
std::vector<AssumptionWitness> khasminskii_violations(const CoefficientSet& coeffs, int dim,
                                                      double p, double declared_K1, double radius,
                                                      std::int64_t samples, std::uint64_t seed);

std::vector<TamingGapRow> check_taming_gap(const CoefficientSet& coeffs, int dim, double radius,
                                           const std::vector<double>& dt_list, double alpha,
                                           std::int64_t samples, std::uint64_t seed);

/// Full battery for the CLI `check` subcommand.
AssumptionReport run_assumption_checks(const NsddeProblem& problem, double radius,
                                       std::int64_t samples, const std::vector<double>& dt_list,
                                       double alpha, std::uint64_t seed);

}  // namespace nsdde
