#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "nsdde/assumptions.hpp"
#include "nsdde/experiments.hpp"

namespace nsdde {

/// Resolved experiment configuration. Step sizes are dyadic exponents of the
/// delay (dt = tau / 2^e) so grid commensurability holds by construction.
struct ExperimentConfig {
    std::string problem = "linear-sdde";
    std::vector<SchemeKind> schemes = {SchemeKind::TamedMilstein};
    int m_lo = 3;
    int m_hi = 8;
    int ref_exponent = 11;
    std::int64_t paths = 1000;
    double p = 2.0;
    double alpha = 0.5;
    std::uint64_t seed = 42;
    std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
    std::string output_dir = ".";
    int threads = 0;  // 0 = hardware concurrency

    std::vector<int> m_exponents() const;
    /// Throws ConstraintViolation on any violated invariant.
    void validate() const;
};

/// JSON round-trip used for the run manifest and --config files:
/// parse_config_json(config_to_json(c)) == c.
std::string config_to_json(const ExperimentConfig& config, const std::string& subcommand = "");
ExperimentConfig parse_config_json(const std::string& text);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Shortest decimal representation that round-trips a double exactly
/// (17 significant digits).
std::string format_double(double x);

void write_convergence_csv(const ConvergenceReport& report, std::ostream& os);
void write_moment_csv(const MomentReport& report, std::ostream& os);
void write_exit_csv(const ExitReport& report, std::ostream& os);
void write_gap_csv(const GapReport& report, std::ostream& os);
void write_assumption_csv(const AssumptionReport& report, std::ostream& os);

std::string tool_version();

}  // namespace nsdde
