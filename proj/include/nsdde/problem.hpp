#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsdde/rational.hpp"

namespace nsdde {

// Coefficient callbacks write into caller-provided storage so the hot
// simulation loop does not allocate. All state spans have length dim.
using SegmentFn = std::function<void(double t, std::span<double> out)>;
using UnaryFn = std::function<void(std::span<const double> x, std::span<double> out)>;
using PairFn =
    std::function<void(std::span<const double> x, std::span<const double> y, std::span<double> out)>;
using QuadFn = std::function<void(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> u, std::span<const double> v,
                                  std::span<double> out)>;

/// Prescribed path on [-tau, 0] seeding the delayed dynamics; queries in
/// [-2*tau, -tau) return the constant value at -tau.
struct InitialSegment {
    SegmentFn evaluate;
    double holder_constant = 1.0;  // Lipschitz-in-time envelope of the segment
};

/// b is the drift, sigma the diffusion (scalar driving noise), and the two
/// product callbacks are d(sigma)/dx * sigma and d(sigma)/dy * sigma as the
/// discrete scheme consumes them: the dy product takes the current pair plus
/// the delayed pair sigma is evaluated at.
struct CoefficientSet {
    UnaryFn neutral;                   // D: R^n -> R^n
    PairFn drift;                      // b(x, y)
    PairFn diffusion;                  // sigma(x, y)
    PairFn diffusion_dx_diffusion;     // (d sigma/dx)(x,y) * sigma(x,y)
    QuadFn diffusion_dy_diffusion;     // (d sigma/dy)(x,y) * sigma(u,v)
};

struct TamingParams {
    double alpha = 0.5;  // taming exponent, in (0, 1/2]
};

struct NsddeProblem {
    std::string name;
    int dim = 1;
    CoefficientSet coeffs;
    InitialSegment segment;
    Rational delay{1};    // tau > 0
    Rational horizon{4};  // T > tau
    double kappa = 0.0;          // declared contraction constant of the neutral term
    double khasminskii_K1 = 0.0; // declared one-sided growth constant
    double khasminskii_p = 4.0;  // exponent of the growth condition, > 2
};

struct ValidationRule {
    std::string rule;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    bool ok = false;
    std::vector<ValidationRule> rules;

    const ValidationRule* find(std::string_view rule) const {
        for (const auto& r : rules)
            if (r.rule == rule) return &r;
        return nullptr;
    }
};

/// Structural checks: kappa in (0,1), D(0)=0, tau>0, T>tau, p>2, and tau,T
/// commensurable. Failures are reported, not thrown.
ValidationReport validate_problem(const NsddeProblem& problem);

/// Segment value at t in [-2*tau, 0]; throws OutOfSegment outside.
void evaluate_segment(const NsddeProblem& problem, double t, std::span<double> out);
std::vector<double> evaluate_segment(const NsddeProblem& problem, double t);

/// Registered test problems: "linear-sdde", "cubic-tamed", "pure-neutral".
NsddeProblem builtin_problem(std::string_view name);
std::vector<std::string> builtin_problem_names();

}  // namespace nsdde
