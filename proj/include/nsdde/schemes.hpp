#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsdde/brownian.hpp"
#include "nsdde/grid.hpp"
#include "nsdde/problem.hpp"

namespace nsdde {

enum class SchemeKind {
    EulerMaruyama,       // drops the iterated-integral terms, raw drift
    TamedEulerMaruyama,  // drops the iterated-integral terms, tamed drift
    Milstein,            // keeps the iterated-integral terms, raw drift
    TamedMilstein,       // the full scheme: tamed drift + iterated integrals
};

std::string_view scheme_name(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);  // throws ConstraintViolation
std::vector<SchemeKind> all_schemes();

/// States beyond the overflow guard mark a path as exploded; explosion is
/// recorded, not thrown, so divergence statistics stay collectable.
inline constexpr double kOverflowGuard = 1e12;

/// Discrete trajectory Y_{t_k} for k = -2m..M. Indices k <= 0 hold the
/// (extended) initial segment. If the path exploded, states from
/// explosion_step on are absent.
struct Trajectory {
    GridSpec grid;
    int dim = 1;
    std::vector<double> states;  // row k+2m holds Y_{t_k}
    bool exploded = false;
    std::int64_t explosion_step = 0;  // first index without a finite state

    std::span<const double> at(std::int64_t k) const {
        return {states.data() + static_cast<std::size_t>((k + 2 * grid.m) * dim),
                static_cast<std::size_t>(dim)};
    }
    /// Last index with a stored state (M when the path did not explode).
    std::int64_t last_step() const { return exploded ? explosion_step - 1 : grid.M; }
};

/// Scratch buffers for the one-step maps (one per worker thread).
struct SchemeWorkspace {
    std::vector<double> drift, diffusion, dx_prod, dy_prod, neutral_next, neutral_cur;
    explicit SchemeWorkspace(int dim = 1) { resize(dim); }
    void resize(int dim) {
        drift.resize(dim);
        diffusion.resize(dim);
        dx_prod.resize(dim);
        dy_prod.resize(dim);
        neutral_next.resize(dim);
        neutral_cur.resize(dim);
    }
};

/// One step of the chosen scheme. y_cur = Y_k, y_del = Y_{k-m},
/// y_del2 = Y_{k-2m}, y_del_next = Y_{k+1-m}. Returns false on overflow
/// (non-finite coefficient value or |Y_{k+1}| >= the guard).
bool scheme_step(SchemeKind kind, const CoefficientSet& coeffs, std::span<const double> y_cur,
                 std::span<const double> y_del, std::span<const double> y_del2,
                 std::span<const double> y_del_next, double db, double l1, double l2, double dt,
                 double alpha, std::span<double> out, SchemeWorkspace& ws);

/// Convenience wrappers mirroring the one-step contracts directly.
std::optional<std::vector<double>> step_tamed_milstein(
    std::span<const double> y_cur, std::span<const double> y_del, std::span<const double> y_del2,
    std::span<const double> y_del_next, const CoefficientSet& coeffs, double db, double l1,
    double l2, double dt, double alpha);
std::optional<std::vector<double>> step_baseline(
    SchemeKind kind, std::span<const double> y_cur, std::span<const double> y_del,
    std::span<const double> y_del2, std::span<const double> y_del_next,
    const CoefficientSet& coeffs, double db, double l1, double l2, double dt, double alpha);

/// Fills k = -2m..0 from the initial segment, then iterates the one-step map
/// to the horizon (or to the explosion step).
Trajectory simulate_path(const NsddeProblem& problem, const GridSpec& grid,
                         const StepIncrements& inc, SchemeKind kind, double alpha);

/// Piecewise-constant step process: Y_{t_k} for t in [t_k, t_{k+1}), and
/// Y_{t_M} at t = T. Throws OutOfRange outside [0, T].
std::span<const double> step_process_lookup(const Trajectory& traj, double t);

/// CSV export: header t,y_0..y_{n-1}, one row per grid node k >= 0.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace nsdde
