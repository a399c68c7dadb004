#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nsdde/errors.hpp"

namespace nsdde {

inline double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline bool all_finite(std::span<const double> v) {
    for (double c : v)
        if (!std::isfinite(c)) return false;
    return true;
}

struct TamedDriftValue {
    std::vector<double> value;
    double raw_norm = 0.0;  // |b(x,y)| before taming
};

/// Scales the drift by 1/(1 + dt^alpha * |b|), which bounds the result by
/// min(dt^{-alpha}, |b|) while keeping its direction.
inline double taming_factor(double raw_norm, double dt, double alpha) {
    return 1.0 / (1.0 + std::pow(dt, alpha) * raw_norm);
}

/// In-place variant used by the simulation loop. Returns the raw norm.
inline double tame_drift_inplace(std::span<double> drift, double dt, double alpha) {
    if (!all_finite(drift)) throw NonFiniteInput("tame_drift: non-finite drift value");
    const double raw_norm = euclidean_norm(drift);
    const double factor = taming_factor(raw_norm, dt, alpha);
    for (double& c : drift) c *= factor;
    return raw_norm;
}

inline TamedDriftValue tame_drift(std::span<const double> drift, double dt, double alpha) {
    TamedDriftValue result;
    result.value.assign(drift.begin(), drift.end());
    result.raw_norm = tame_drift_inplace(result.value, dt, alpha);
    return result;
}

/// |b - b_h| = dt^alpha * |b|^2 / (1 + dt^alpha * |b|).
inline double taming_gap(std::span<const double> drift, double dt, double alpha) {
    if (!all_finite(drift)) throw NonFiniteInput("taming_gap: non-finite drift value");
    const double raw_norm = euclidean_norm(drift);
    const double scale = std::pow(dt, alpha);
    return scale * raw_norm * raw_norm / (1.0 + scale * raw_norm);
}

inline double taming_gap_norm(double raw_norm, double dt, double alpha) {
    const double scale = std::pow(dt, alpha);
    return scale * raw_norm * raw_norm / (1.0 + scale * raw_norm);
}

}  // namespace nsdde
