#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pointwave/initial_data.hpp"
#include "pointwave/nonlinearity.hpp"
#include "pointwave/zeta_dynamics.hpp"

namespace pointwave {

// Config grammar: one "key = value" per line, '#' starts a comment, lists are
// comma-separated. Every key and its default is listed in README.md.

struct ComponentSpec {
    std::optional<double> amplitude; // unset means F(zeta0) for phi, 0 for pi
    double radius = 1.0;
    double tail = 0.0;
    std::filesystem::path file; // spline data; overrides the bump when set
};

struct Scenario {
    std::string name = "scenario";
    double T_final = 50.0;
    bool backward = false;

    std::string nonlinearity = "cubic";
    std::vector<double> coefficients; // for nonlinearity = polynomial

    std::string data_kind = "bump"; // bump | spline | stationary | zero
    double q = 0.0;
    double zeta0 = 0.5;
    double zeta_dot0 = 0.0;
    ComponentSpec phi;
    ComponentSpec pi;
    double compat_tol = 1e-10;

    ODEConfig ode;
    double quad_tol = 1e-12;
    std::vector<double> energy_times{1.0, 5.0, 10.0, 20.0};

    bool oracle_enabled = false;
    double oracle_h = 8.0 / 4096.0;
    double oracle_R = 0.0; // grid radius; 0 means support radius + oracle_t + 1
    double oracle_t = 10.0;
    double oracle_radius = 8.0; // comparison ball
    double oracle_tol = 1e-3;

    std::filesystem::path output_dir = "out";
    double output_dt = 0.5;
    std::vector<double> snapshots{0.0, 1.0, 5.0};
    std::size_t snapshot_points = 200;
    double snapshot_radius = 6.0;

    std::vector<double> probe_radii{2.0};
    std::optional<double> expect_q_plus;
    double drift_tol = 1e-6;
    double dpos_tol = 1e-3;
};

/// Throws ConfigurationError with a line number (syntax, unknown or duplicate keys) or the
/// offending key (validation). Relative file paths resolve against base_dir.
Scenario parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_config(const std::filesystem::path& path);

/// Initial state (before any time reversal) and the nonlinearity of a scenario.
InitialState build_state(const Scenario& s);
Nonlinearity build_nonlinearity(const Scenario& s);

struct ScenarioReport {
    std::string scenario;
    double q_plus = 0.0;
    bool converged = false;
    double F_residual = 0.0;
    double energy_drift_rel = 0.0;
    double huygens_max_abs = 0.0;
    double lambda = 0.0;
    double lambda_margin = 0.0;
    bool truncation_activated = false;
    std::optional<double> oracle_rel_l2;
    std::optional<double> oracle_rel_l2_cone_excluded;
    std::vector<std::pair<double, double>> d_pos; // (radius, value at T)
    std::map<std::string, bool> checks;
    std::string diagnostics;
    double wall_seconds = 0.0;

    bool passed() const;
};

/// Runs the pipeline and writes zeta.csv, field_t*.csv, oracle files and report.json to
/// s.output_dir. Module errors propagate.
ScenarioReport run_scenario(const Scenario& s);

std::string report_json(const ScenarioReport& r);

} // namespace pointwave
