#include "nsdde/cli_io.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "nsdde/errors.hpp"

namespace nsdde {

std::vector<int> ExperimentConfig::m_exponents() const {
    std::vector<int> exps;
    for (int e = m_lo; e <= m_hi; ++e) exps.push_back(e);
    return exps;
}

void ExperimentConfig::validate() const {
    if (m_lo > m_hi) throw ConstraintViolation("m-exponent range is empty");
    if (m_lo < 1) throw ConstraintViolation("m-exponents must be >= 1 (step must stay below 1)");
    if (ref_exponent <= m_hi)
        throw ConstraintViolation("ref-exponent must exceed every coarse exponent");
    if (ref_exponent > 26) throw ConstraintViolation("ref-exponent too large (max 26)");
    if (paths < 1) throw ConstraintViolation("paths must be >= 1");
    if (!(alpha > 0.0 && alpha <= 0.5)) throw ConstraintViolation("alpha must lie in (0, 1/2]");
    if (!(p >= 1.0)) throw ConstraintViolation("p must be >= 1");
    if (schemes.empty()) throw ConstraintViolation("at least one scheme is required");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw ConstraintViolation("radii must be positive");
        if (i > 0 && !(radii[i - 1] < radii[i]))
            throw ConstraintViolation("radii must be strictly ascending");
    }
    if (threads < 0) throw ConstraintViolation("threads must be >= 0");
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string tool_version() { return "nsdde 1.0.0"; }

std::string config_to_json(const ExperimentConfig& config, const std::string& subcommand) {
    nlohmann::ordered_json j;
    j["problem"] = config.problem;
    std::vector<std::string> scheme_names;
    for (SchemeKind s : config.schemes) scheme_names.emplace_back(scheme_name(s));
    j["schemes"] = scheme_names;
    j["m_lo"] = config.m_lo;
    j["m_hi"] = config.m_hi;
    j["ref_exponent"] = config.ref_exponent;
    j["paths"] = config.paths;
    j["p"] = config.p;
    j["alpha"] = config.alpha;
    j["seed"] = config.seed;
    j["radii"] = config.radii;
    j["output_dir"] = config.output_dir;
    j["threads"] = config.threads;
    j["tool_version"] = tool_version();
    if (!subcommand.empty()) j["subcommand"] = subcommand;
    return j.dump(2) + "\n";
}

ExperimentConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConstraintViolation(std::string("bad config file: ") + e.what());
    }
    ExperimentConfig config;
    try {
        if (j.contains("problem")) config.problem = j["problem"].get<std::string>();
        if (j.contains("schemes")) {
            config.schemes.clear();
            for (const auto& name : j["schemes"])
                config.schemes.push_back(parse_scheme(name.get<std::string>()));
        }
        if (j.contains("m_lo")) config.m_lo = j["m_lo"].get<int>();
        if (j.contains("m_hi")) config.m_hi = j["m_hi"].get<int>();
        if (j.contains("ref_exponent")) config.ref_exponent = j["ref_exponent"].get<int>();
        if (j.contains("paths")) config.paths = j["paths"].get<std::int64_t>();
        if (j.contains("p")) config.p = j["p"].get<double>();
        if (j.contains("alpha")) config.alpha = j["alpha"].get<double>();
        if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("radii")) config.radii = j["radii"].get<std::vector<double>>();
        if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("threads")) config.threads = j["threads"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ConstraintViolation(std::string("bad config value: ") + e.what());
    }
    return config;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.problem == b.problem && a.schemes == b.schemes && a.m_lo == b.m_lo &&
           a.m_hi == b.m_hi && a.ref_exponent == b.ref_exponent && a.paths == b.paths &&
           a.p == b.p && a.alpha == b.alpha && a.seed == b.seed && a.radii == b.radii &&
           a.output_dir == b.output_dir && a.threads == b.threads;
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& os) {
    os << "scheme,dt,paths,p,error,stderr,exploded_fraction\n";
    for (const auto& row : report.rows) {
        os << scheme_name(row.scheme) << ',' << format_double(row.dt) << ',' << row.paths << ','
           << format_double(row.p) << ',' << format_double(row.error) << ','
           << format_double(row.stderr_) << ',' << format_double(row.exploded_fraction) << '\n';
    }
}

void write_moment_csv(const MomentReport& report, std::ostream& os) {
    os << "scheme,dt,p,sup_moment,stderr,exploded_fraction\n";
    for (const auto& row : report.rows) {
        os << scheme_name(row.scheme) << ',' << format_double(row.dt) << ','
           << format_double(row.p) << ',' << format_double(row.sup_moment) << ','
           << format_double(row.stderr_) << ',' << format_double(row.exploded_fraction) << '\n';
    }
}

void write_exit_csv(const ExitReport& report, std::ostream& os) {
    os << "which,R,prob,scaled\n";
    for (const auto& row : report.rows) {
        os << row.which << ',' << format_double(row.radius) << ',' << format_double(row.prob)
           << ',' << format_double(row.scaled) << '\n';
    }
}

void write_gap_csv(const GapReport& report, std::ostream& os) {
    os << "dt,p,gap,stderr\n";
    for (const auto& row : report.rows) {
        os << format_double(row.dt) << ',' << format_double(row.p) << ','
           << format_double(row.gap) << ',' << format_double(row.stderr_) << '\n';
    }
}

void write_assumption_csv(const AssumptionReport& report, std::ostream& os) {
    os << "quantity,R,samples,value,pass\n";
    const std::string prefix =
        format_double(report.radius) + ',' + std::to_string(report.samples) + ',';
    os << "kappa_hat," << prefix << format_double(report.contraction.kappa_hat) << ','
       << (report.contraction.pass ? 1 : 0) << '\n';
    os << "K_R_hat," << prefix << format_double(report.lipschitz.K_R_hat) << ",1\n";
    os << "Kbar_R_hat," << prefix << format_double(report.lipschitz.Kbar_R_hat) << ",1\n";
    os << "K1_hat," << prefix << format_double(report.khasminskii.K1_hat) << ','
       << (report.khasminskii.ok && report.khasminskii.violations.empty() ? 1 : 0) << '\n';
    for (const auto& row : report.taming_gap) {
        os << "N_R_hat@dt=" << format_double(row.dt) << ',' << prefix
           << format_double(row.n_r_hat) << ",1\n";
        os << "N_R_alpha_hat@dt=" << format_double(row.dt) << ',' << prefix
           << format_double(row.n_r_alpha_hat) << ",1\n";
    }
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << 't';
    for (int i = 0; i < traj.dim; ++i) os << ",y_" << i;
    os << '\n';
    for (std::int64_t k = 0; k <= traj.last_step(); ++k) {
        os << format_double(traj.grid.node_time(k));
        const auto state = traj.at(k);
        for (double c : state) os << ',' << format_double(c);
        os << '\n';
    }
}

}  // namespace nsdde
