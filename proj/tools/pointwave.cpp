// pointwave: run scenario configs for the point-interaction wave model.
//
//   pointwave run <config> [--out DIR] [--oracle] [--T t] [--tol x]
//   pointwave suite <dir> [--out DIR]
//
// PW_THREADS caps the OpenMP thread count.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointwave/errors.hpp"
#include "pointwave/kernels.hpp"
#include "pointwave/scenario.hpp"

namespace fs = std::filesystem;
using namespace pointwave;

namespace {

struct Overrides {
    std::string out;
    bool oracle = false;
    std::optional<double> T;
    std::optional<double> tol;
};

void apply(Scenario& s, const Overrides& o) {
    if (!o.out.empty()) s.output_dir = o.out;
    if (o.oracle) s.oracle_enabled = true;
    if (o.T) {
        if (!(*o.T > 0.0)) throw ConfigurationError("--T must be positive");
        s.T_final = *o.T;
    }
    if (o.tol) {
        if (!(*o.tol > 0.0)) throw ConfigurationError("--tol must be positive");
        s.ode.rel_tol = *o.tol;
        s.ode.abs_tol = *o.tol * 1e-2;
    }
}

int report_error(const std::string& where, const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = e.what();
    j["where"] = where;
    const char* kind = "error";
    if (dynamic_cast<const ConfigurationError*>(&e)) kind = "configuration";
    else if (dynamic_cast<const CompatibilityError*>(&e)) kind = "compatibility";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
    else if (dynamic_cast<const NumericalError*>(&e)) kind = "numerical";
    j["kind"] = kind;
    std::cerr << j.dump() << '\n';
    return 2;
}

void print_checks(const ScenarioReport& r) {
    std::printf("%-28s q+ = %-10.6g drift = %-9.2e margin = %-9.3g %s\n", r.scenario.c_str(),
                r.q_plus, r.energy_drift_rel, r.lambda_margin, r.passed() ? "PASS" : "FAIL");
    for (const auto& [name, ok] : r.checks) {
        if (!ok) std::printf("    failed check: %s\n", name.c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("PW_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) kernels::set_threads(n);
    }

    CLI::App app{"Point-interaction wave scenarios"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config;
    auto* run = app.add_subcommand("run", "Run one scenario config");
    run->add_option("config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", ov.out, "Output directory (overrides output.dir)");
    run->add_flag("--oracle", ov.oracle, "Enable the finite-difference oracle");
    run->add_option("--T", ov.T, "Final time (overrides T_final)");
    run->add_option("--tol", ov.tol, "ODE relative tolerance (absolute = 1e-2 * tol)");

    std::string suite_dir;
    std::string suite_out = "suite_out";
    auto* suite = app.add_subcommand("suite", "Run every *.cfg in a directory");
    suite->add_option("dir", suite_dir, "Directory of configs")->required()->check(
        CLI::ExistingDirectory);
    suite->add_option("--out", suite_out, "Root output directory");

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        try {
            Scenario s = load_config(config);
            apply(s, ov);
            const auto rep = run_scenario(s);
            print_checks(rep);
            return rep.passed() ? 0 : 1;
        } catch (const std::exception& e) {
            return report_error(config, e);
        }
    }

    std::vector<fs::path> configs;
    for (const auto& entry : fs::directory_iterator(suite_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cfg") {
            configs.push_back(entry.path());
        }
    }
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::cerr << "no .cfg files in " << suite_dir << '\n';
        return 2;
    }

    fs::create_directories(suite_out);
    std::ofstream summary(fs::path(suite_out) / "summary.csv");
    summary << "scenario,status,q_plus,converged,energy_drift_rel,lambda_margin,oracle_rel_l2\n";
    int failures = 0;
    for (const auto& path : configs) {
        try {
            Scenario s = load_config(path);
            s.output_dir = fs::path(suite_out) / s.name;
            const auto rep = run_scenario(s);
            print_checks(rep);
            char oracle[40] = "";
            if (rep.oracle_rel_l2) std::snprintf(oracle, sizeof oracle, "%.17g", *rep.oracle_rel_l2);
            char line[512];
            std::snprintf(line, sizeof line, "%s,%s,%.17g,%d,%.17g,%.17g,%s\n",
                          rep.scenario.c_str(), rep.passed() ? "PASS" : "FAIL", rep.q_plus,
                          rep.converged ? 1 : 0, rep.energy_drift_rel, rep.lambda_margin,
                          oracle);
            summary << line;
            if (!rep.passed()) ++failures;
        } catch (const std::exception& e) {
            report_error(path.string(), e);
            summary << path.stem().string() << ",ERROR,,,,,\n";
            ++failures;
        }
    }
    std::printf("%zu scenarios, %d failed\n", configs.size(), failures);
    return failures == 0 ? 0 : 1;
}
