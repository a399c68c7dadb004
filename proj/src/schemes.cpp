#include "nsdde/schemes.hpp"

#include <cmath>

#include "nsdde/errors.hpp"
#include "nsdde/taming.hpp"

namespace nsdde {

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::EulerMaruyama: return "em";
        case SchemeKind::TamedEulerMaruyama: return "tamed-em";
        case SchemeKind::Milstein: return "milstein";
        case SchemeKind::TamedMilstein: return "tamed-milstein";
    }
    return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
    if (name == "em") return SchemeKind::EulerMaruyama;
    if (name == "tamed-em") return SchemeKind::TamedEulerMaruyama;
    if (name == "milstein") return SchemeKind::Milstein;
    if (name == "tamed-milstein") return SchemeKind::TamedMilstein;
    throw ConstraintViolation("unknown scheme \"" + std::string(name) + "\"");
}

std::vector<SchemeKind> all_schemes() {
    return {SchemeKind::EulerMaruyama, SchemeKind::TamedEulerMaruyama, SchemeKind::Milstein,
            SchemeKind::TamedMilstein};
}

namespace {

bool uses_taming(SchemeKind kind) {
    return kind == SchemeKind::TamedEulerMaruyama || kind == SchemeKind::TamedMilstein;
}

bool uses_iterated_integrals(SchemeKind kind) {
    return kind == SchemeKind::Milstein || kind == SchemeKind::TamedMilstein;
}

}  // namespace

bool scheme_step(SchemeKind kind, const CoefficientSet& coeffs, std::span<const double> y_cur,
                 std::span<const double> y_del, std::span<const double> y_del2,
                 std::span<const double> y_del_next, double db, double l1, double l2, double dt,
                 double alpha, std::span<double> out, SchemeWorkspace& ws) {
    const std::size_t n = y_cur.size();

    coeffs.drift(y_cur, y_del, ws.drift);
    if (!all_finite(ws.drift)) return false;
    if (uses_taming(kind)) tame_drift_inplace(ws.drift, dt, alpha);

    coeffs.diffusion(y_cur, y_del, ws.diffusion);
    coeffs.neutral(y_del_next, ws.neutral_next);
    coeffs.neutral(y_del, ws.neutral_cur);
    if (!all_finite(ws.diffusion) || !all_finite(ws.neutral_next) || !all_finite(ws.neutral_cur))
        return false;

    const bool milstein = uses_iterated_integrals(kind);
    if (milstein) {
        coeffs.diffusion_dx_diffusion(y_cur, y_del, ws.dx_prod);
        coeffs.diffusion_dy_diffusion(y_cur, y_del, y_del, y_del2, ws.dy_prod);
        if (!all_finite(ws.dx_prod) || !all_finite(ws.dy_prod)) return false;
    }

    for (std::size_t i = 0; i < n; ++i) {
        double next = ws.neutral_next[i] + y_cur[i] - ws.neutral_cur[i] + ws.drift[i] * dt +
                      ws.diffusion[i] * db;
        if (milstein) next += ws.dx_prod[i] * l1 + ws.dy_prod[i] * l2;
        out[i] = next;
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(out[i]) || std::abs(out[i]) >= kOverflowGuard) return false;
    return true;
}

std::optional<std::vector<double>> step_tamed_milstein(
    std::span<const double> y_cur, std::span<const double> y_del, std::span<const double> y_del2,
    std::span<const double> y_del_next, const CoefficientSet& coeffs, double db, double l1,
    double l2, double dt, double alpha) {
    return step_baseline(SchemeKind::TamedMilstein, y_cur, y_del, y_del2, y_del_next, coeffs, db,
                         l1, l2, dt, alpha);
}

std::optional<std::vector<double>> step_baseline(
    SchemeKind kind, std::span<const double> y_cur, std::span<const double> y_del,
    std::span<const double> y_del2, std::span<const double> y_del_next,
    const CoefficientSet& coeffs, double db, double l1, double l2, double dt, double alpha) {
    SchemeWorkspace ws(static_cast<int>(y_cur.size()));
    std::vector<double> out(y_cur.size(), 0.0);
    if (!scheme_step(kind, coeffs, y_cur, y_del, y_del2, y_del_next, db, l1, l2, dt, alpha, out,
                     ws))
        return std::nullopt;
    return out;
}

Trajectory simulate_path(const NsddeProblem& problem, const GridSpec& grid,
                         const StepIncrements& inc, SchemeKind kind, double alpha) {
    const int n = problem.dim;
    Trajectory traj;
    traj.grid = grid;
    traj.dim = n;
    traj.states.assign(static_cast<std::size_t>((2 * grid.m + grid.M + 1) * n), 0.0);

    auto row = [&](std::int64_t k) {
        return std::span<double>(traj.states.data() + static_cast<std::size_t>((k + 2 * grid.m) * n),
                                 static_cast<std::size_t>(n));
    };

    for (std::int64_t k = -2 * grid.m; k <= 0; ++k)
        evaluate_segment(problem, grid.node_time(k), row(k));

    SchemeWorkspace ws(n);
    const double dt = grid.dt();
    for (std::int64_t k = 0; k < grid.M; ++k) {
        const bool ok = scheme_step(kind, problem.coeffs, traj.at(k), traj.at(k - grid.m),
                                    traj.at(k - 2 * grid.m), traj.at(k + 1 - grid.m),
                                    inc.db[static_cast<std::size_t>(k)],
                                    inc.l1[static_cast<std::size_t>(k)],
                                    inc.l2[static_cast<std::size_t>(k)], dt, alpha, row(k + 1), ws);
        if (!ok) {
            traj.exploded = true;
            traj.explosion_step = k + 1;
            traj.states.resize(static_cast<std::size_t>((k + 1 + 2 * grid.m) * n));
            break;
        }
    }
    return traj;
}

std::span<const double> step_process_lookup(const Trajectory& traj, double t) {
    const double horizon = traj.grid.horizon.value();
    if (!(t >= 0.0 && t <= horizon))
        throw OutOfRange("step process query t = " + std::to_string(t) + " outside [0, T]");
    std::int64_t k = static_cast<std::int64_t>(std::floor(t / traj.grid.dt()));
    if (k > traj.grid.M) k = traj.grid.M;
    if (traj.exploded && k >= traj.explosion_step)
        throw OutOfRange("step process query beyond the explosion step");
    return traj.at(k);
}

}  // namespace nsdde
