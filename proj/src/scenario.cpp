#include "pointwave/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pointwave/errors.hpp"
#include "pointwave/fd_oracle.hpp"
#include "pointwave/field_assembly.hpp"
#include "pointwave/free_wave.hpp"

namespace pointwave {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& what) {
    throw ConfigurationError("invalid value '" + value + "' for key '" + key + "': " + what);
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x)) {
        bad_value(key, v, "expected a finite number");
    }
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    bad_value(key, v, "expected true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(to_double(key, trim(item)));
    }
    return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) {
        throw ConfigurationError("key '" + key + "': " + what);
    }
}

using Setter = std::function<void(Scenario&, const std::string& key, const std::string& value)>;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::map<std::string, Setter> setters(const std::filesystem::path& base) {
    std::map<std::string, Setter> m;
    auto num = [&m](const std::string& k, auto member) {
        m[k] = [member](Scenario& s, const std::string& key, const std::string& v) {
            std::invoke(member, s) = to_double(key, v);
        };
    };
    auto list = [&m](const std::string& k, auto member) {
        m[k] = [member](Scenario& s, const std::string& key, const std::string& v) {
            std::invoke(member, s) = to_list(key, v);
        };
    };

    m["name"] = [](Scenario& s, const std::string&, const std::string& v) { s.name = v; };
    num("T_final", [](Scenario& s) -> double& { return s.T_final; });
    m["direction"] = [](Scenario& s, const std::string& key, const std::string& v) {
        if (v == "forward") s.backward = false;
        else if (v == "backward") s.backward = true;
        else bad_value(key, v, "expected forward or backward");
    };
    m["nonlinearity.name"] = [](Scenario& s, const std::string&, const std::string& v) {
        s.nonlinearity = v;
    };
    list("nonlinearity.coefficients", [](Scenario& s) -> std::vector<double>& {
        return s.coefficients;
    });
    m["data.kind"] = [](Scenario& s, const std::string&, const std::string& v) {
        s.data_kind = v;
    };
    num("data.q", [](Scenario& s) -> double& { return s.q; });
    num("data.zeta0", [](Scenario& s) -> double& { return s.zeta0; });
    num("data.zeta_dot0", [](Scenario& s) -> double& { return s.zeta_dot0; });
    num("data.compat_tol", [](Scenario& s) -> double& { return s.compat_tol; });
    for (const char* comp : {"phi", "pi"}) {
        const std::string c(comp);
        auto get = [c](Scenario& s) -> ComponentSpec& { return c == "phi" ? s.phi : s.pi; };
        m["data." + c + ".amplitude"] = [get](Scenario& s, const std::string& key,
                                              const std::string& v) {
            if (v == "auto") get(s).amplitude.reset();
            else get(s).amplitude = to_double(key, v);
        };
        m["data." + c + ".radius"] = [get](Scenario& s, const std::string& key,
                                           const std::string& v) {
            get(s).radius = to_double(key, v);
        };
        m["data." + c + ".tail"] = [get](Scenario& s, const std::string& key,
                                         const std::string& v) {
            get(s).tail = to_double(key, v);
        };
        m["data." + c + ".file"] = [get, base](Scenario& s, const std::string& key,
                                               const std::string& v) {
            const auto p = resolve(base, v);
            if (!std::filesystem::exists(p)) bad_value(key, v, "file does not exist");
            get(s).file = p;
        };
    }
    num("ode.rel_tol", [](Scenario& s) -> double& { return s.ode.rel_tol; });
    num("ode.abs_tol", [](Scenario& s) -> double& { return s.ode.abs_tol; });
    num("ode.max_step", [](Scenario& s) -> double& { return s.ode.max_step; });
    num("quad.tol", [](Scenario& s) -> double& { return s.quad_tol; });
    list("energy.times", [](Scenario& s) -> std::vector<double>& { return s.energy_times; });
    m["oracle.enabled"] = [](Scenario& s, const std::string& key, const std::string& v) {
        s.oracle_enabled = to_bool(key, v);
    };
    num("oracle.h", [](Scenario& s) -> double& { return s.oracle_h; });
    num("oracle.R", [](Scenario& s) -> double& { return s.oracle_R; });
    num("oracle.t", [](Scenario& s) -> double& { return s.oracle_t; });
    num("oracle.radius", [](Scenario& s) -> double& { return s.oracle_radius; });
    num("oracle.tol", [](Scenario& s) -> double& { return s.oracle_tol; });
    m["output.dir"] = [base](Scenario& s, const std::string&, const std::string& v) {
        s.output_dir = resolve(base, v);
    };
    num("output.dt", [](Scenario& s) -> double& { return s.output_dt; });
    list("output.snapshots", [](Scenario& s) -> std::vector<double>& { return s.snapshots; });
    m["output.snapshot_points"] = [](Scenario& s, const std::string& key, const std::string& v) {
        const double n = to_double(key, v);
        if (!(n >= 1.0) || n != std::floor(n)) bad_value(key, v, "expected a positive integer");
        s.snapshot_points = static_cast<std::size_t>(n);
    };
    num("output.snapshot_radius", [](Scenario& s) -> double& { return s.snapshot_radius; });
    list("probe.radii", [](Scenario& s) -> std::vector<double>& { return s.probe_radii; });
    m["expect.q_plus"] = [](Scenario& s, const std::string& key, const std::string& v) {
        s.expect_q_plus = to_double(key, v);
    };
    num("checks.drift_tol", [](Scenario& s) -> double& { return s.drift_tol; });
    num("checks.dpos_tol", [](Scenario& s) -> double& { return s.dpos_tol; });
    return m;
}

void validate(const Scenario& s) {
    require(s.T_final > 0.0, "T_final", "must be positive");
    require(!s.name.empty(), "name", "must not be empty");
    static const std::set<std::string> names{"cubic", "linear", "quintic", "polynomial"};
    require(names.count(s.nonlinearity) == 1, "nonlinearity.name",
            "expected cubic, linear, quintic or polynomial");
    require(s.nonlinearity != "polynomial" || !s.coefficients.empty(),
            "nonlinearity.coefficients", "required for a polynomial nonlinearity");
    static const std::set<std::string> kinds{"bump", "spline", "stationary", "zero"};
    require(kinds.count(s.data_kind) == 1, "data.kind",
            "expected bump, spline, stationary or zero");
    require(s.data_kind != "spline" || !s.phi.file.empty(), "data.phi.file",
            "required for spline data");
    require(s.phi.radius > 0.0, "data.phi.radius", "must be positive");
    require(s.pi.radius > 0.0, "data.pi.radius", "must be positive");
    require(s.compat_tol > 0.0, "data.compat_tol", "must be positive");
    require(s.ode.rel_tol > 0.0, "ode.rel_tol", "must be positive");
    require(s.ode.abs_tol > 0.0, "ode.abs_tol", "must be positive");
    require(s.ode.max_step >= 0.0, "ode.max_step", "must be non-negative");
    require(s.quad_tol > 0.0, "quad.tol", "must be positive");
    for (double t : s.energy_times) {
        require(t > 0.0, "energy.times", "times must be positive");
    }
    require(s.oracle_h > 0.0, "oracle.h", "must be positive");
    require(s.oracle_R >= 0.0, "oracle.R", "must be non-negative");
    require(s.oracle_radius > 0.0, "oracle.radius", "must be positive");
    require(s.oracle_tol > 0.0, "oracle.tol", "must be positive");
    if (s.oracle_enabled) {
        require(s.oracle_t > 0.0 && s.oracle_t <= s.T_final, "oracle.t", "must lie in (0, T_final]");
        const double levels = s.oracle_t / s.oracle_h;
        require(std::abs(levels - std::round(levels)) <= 1e-9 * std::max(1.0, levels), "oracle.t",
                "must be a multiple of oracle.h");
    }
    require(s.output_dt > 0.0, "output.dt", "must be positive");
    for (double t : s.snapshots) {
        require(t >= 0.0 && t <= s.T_final, "output.snapshots", "times must lie in [0, T_final]");
    }
    require(s.snapshot_radius > 0.0, "output.snapshot_radius", "must be positive");
    for (double R : s.probe_radii) {
        require(R > 0.0, "probe.radii", "radii must be positive");
    }
    require(s.drift_tol > 0.0, "checks.drift_tol", "must be positive");
    require(s.dpos_tol > 0.0, "checks.dpos_tol", "must be positive");
}

RadialProfile build_component(const ComponentSpec& c, double default_amplitude) {
    RadialProfile p = c.file.empty()
                          ? RadialProfile::bump(c.amplitude.value_or(default_amplitude), c.radius)
                          : RadialProfile::load_spline(c.file);
    if (!c.file.empty() && c.amplitude) {
        if (p.value(0.0) == 0.0) {
            throw ConfigurationError("cannot rescale spline " + c.file.string() +
                                     " to the requested amplitude: its value at r = 0 is 0");
        }
        p = p.scaled(*c.amplitude / p.value(0.0));
    }
    return c.tail != 0.0 ? p.with_tail(c.tail) : p;
}

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

std::string time_tag(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw Error("cannot write " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }
    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << num17(v);
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

} // namespace

Scenario parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    const auto table = setters(base_dir);
    Scenario s;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        std::ostringstream where;
        where << "line " << lineno << ": ";
        if (eq == std::string::npos) {
            throw ConfigurationError(where.str() + "expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigurationError(where.str() + "missing key before '='");
        }
        const auto it = table.find(key);
        if (it == table.end()) {
            throw ConfigurationError(where.str() + "unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ConfigurationError(where.str() + "duplicate key '" + key + "'");
        }
        try {
            it->second(s, key, value);
        } catch (const ConfigurationError& e) {
            throw ConfigurationError(where.str() + e.what());
        }
    }
    validate(s);
    return s;
}

Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigurationError("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

Nonlinearity build_nonlinearity(const Scenario& s) {
    if (s.nonlinearity == "polynomial") {
        return Nonlinearity::polynomial(s.coefficients);
    }
    return Nonlinearity::from_name(s.nonlinearity);
}

InitialState build_state(const Scenario& s) {
    const auto nl = build_nonlinearity(s);
    if (s.data_kind == "stationary") {
        return stationary_data(s.q, nl, s.compat_tol);
    }
    if (s.data_kind == "zero") {
        return make_initial_state(RadialProfile::zero(), RadialProfile::zero(), 0.0, 0.0, nl,
                                  s.compat_tol);
    }
    auto phi = build_component(s.phi, nl.force(s.zeta0));
    auto pi = (s.pi.file.empty() && !s.pi.amplitude) ? RadialProfile::zero()
                                                      : build_component(s.pi, 0.0);
    if (s.pi.tail != 0.0 && pi.tail() == 0.0) pi = pi.with_tail(s.pi.tail);
    return make_initial_state(std::move(phi), std::move(pi), s.zeta0, s.zeta_dot0, nl,
                              s.compat_tol);
}

bool ScenarioReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

ScenarioReport run_scenario(const Scenario& s) {
    const auto wall0 = std::chrono::steady_clock::now();
    const InitialState forward = build_state(s);
    const InitialState state = s.backward ? forward.time_reversed() : forward;
    const Nonlinearity& nl = state.nonlinearity();
    const double sign = s.backward ? -1.0 : 1.0;
    const double T = s.T_final;

    ScenarioReport rep;
    rep.scenario = s.name;

    const EnergyReport E0 = initial_energy(state, s.quad_tol);
    rep.lambda = lambda_bound(nl, E0.total);
    const TruncatedNonlinearity trunc = build_truncation(nl, rep.lambda);

    ODEConfig cfg = s.ode;
    cfg.T_final = T;
    const ZetaHistory history = integrate(state, trunc, cfg);
    const FreeWave wave(state);

    std::filesystem::create_directories(s.output_dir);

    // Amplitude, energy, limit.
    auto energy_at = [&](double t) {
        return t == 0.0 ? E0.total
                        : energy(state, history, t, t + state.support_radius() + 1.0, s.quad_tol)
                              .total;
    };
    const double denom = E0.total != 0.0 ? std::abs(E0.total) : 1.0;
    {
        CsvWriter csv(s.output_dir / "zeta.csv", {"t", "zeta", "zeta_dot", "lambda", "F", "H"});
        const auto rows = static_cast<std::size_t>(std::floor(T / s.output_dt + 1e-9));
        for (std::size_t k = 0; k <= rows; ++k) {
            const double t = std::min(T, s.output_dt * static_cast<double>(k));
            const auto z = history.at(t);
            csv.row({sign * t, z.zeta, sign * z.zeta_dot, wave.trace(t), nl.force(z.zeta),
                     energy_at(t)});
        }
    }
    std::vector<double> etimes;
    for (double t : s.energy_times) {
        if (t <= T) etimes.push_back(t);
    }
    etimes.push_back(T);
    for (double t : etimes) {
        rep.energy_drift_rel =
            std::max(rep.energy_drift_rel, std::abs(energy_at(t) - E0.total) / denom);
    }

    const LimitResult lim = detect_limit(history, nl);
    rep.q_plus = lim.q_plus;
    rep.converged = lim.converged;
    rep.F_residual = lim.residual;
    rep.diagnostics = lim.diagnostics;

    double max_abs_zeta = 0.0;
    for (double z : history.values()) max_abs_zeta = std::max(max_abs_zeta, std::abs(z));
    rep.lambda_margin = rep.lambda - max_abs_zeta;
    rep.truncation_activated = history.truncation_activated();

    // Closed-form Huygens probe on a 50 x 50 grid of the region t >= r + 2.
    for (int i = 0; i < 50; ++i) {
        const double r = 0.05 + 4.95 * i / 49.0;
        for (int k = 0; k < 50; ++k) {
            const double t = r + 2.0 + 8.0 * k / 49.0;
            rep.huygens_max_abs = std::max(rep.huygens_max_abs, std::abs(psi_G_eval(state, r, t)));
        }
    }

    for (double R : s.probe_radii) {
        rep.d_pos.emplace_back(R, distance_to_stationary(state, history, T, rep.q_plus, R).first);
    }

    for (double ts : s.snapshots) {
        CsvWriter csv(s.output_dir / ("field_t" + time_tag(sign * ts) + ".csv"),
                      {"r", "psi", "psi_dot", "psi_f", "psi_S", "psi_reg"});
        for (const auto& f : field_snapshot(state, history, ts, s.snapshot_radius,
                                            s.snapshot_points)) {
            csv.row({f.r, f.psi, sign * f.psi_dot, f.psi_f, f.psi_s, f.psi_reg});
        }
    }

    if (s.oracle_enabled) {
        const double t = s.oracle_t;
        const double R_grid = s.oracle_R > 0.0 ? s.oracle_R : state.support_radius() + t + 1.0;
        const double snaps[] = {t};
        const auto run = oracle::run(state, trunc, t, s.oracle_h, R_grid, snaps);
        const auto cmp = oracle::compare(state, history, run, t, s.oracle_radius);
        rep.oracle_rel_l2 = cmp.rel_l2;
        rep.oracle_rel_l2_cone_excluded = cmp.rel_l2_cone_excluded;
        CsvWriter trace(s.output_dir / "oracle_trace.csv", {"t", "zeta_oracle"});
        for (std::size_t n = 0; n < run.times.size(); ++n) {
            trace.row({sign * run.times[n], run.zeta[n]});
        }
        CsvWriter snap(s.output_dir / "oracle_snapshot.csv", {"r", "u", "u_over_r"});
        const auto& u = run.snapshots.front().u;
        for (std::size_t j = 1; j < u.size(); ++j) {
            const double r = run.h * static_cast<double>(j);
            snap.row({r, u[j], u[j] / r});
        }
    }

    // Checks.
    rep.checks["converged"] = rep.converged;
    if (s.expect_q_plus) {
        rep.checks["expected_limit"] = std::abs(rep.q_plus - *s.expect_q_plus) <= 1e-6;
    }
    rep.checks["energy_drift"] = rep.energy_drift_rel <= s.drift_tol;
    rep.checks["huygens"] = rep.huygens_max_abs <= 1e-13;
    rep.checks["a_priori_bound"] = rep.lambda_margin > 0.0 && !rep.truncation_activated;
    if (state.tail_free() && T > state.support_radius()) {
        double worst = 0.0;
        for (int k = 1; k <= 200; ++k) {
            const double t = state.support_radius() + (T - state.support_radius()) * k / 200.0;
            worst = std::max(worst, std::abs(wave.trace(t)));
        }
        rep.checks["trace_support"] = worst <= 1e-12;
    }
    {
        double worst = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double t = T * k / 20.0;
            worst = std::max(worst, std::abs(regular_trace(state, history, t) -
                                             nl.force(history.at(t).zeta)));
        }
        rep.checks["boundary_identity"] = worst <= 1e-6;
    }
    bool dpos_ok = true;
    for (const auto& [R, d] : rep.d_pos) dpos_ok = dpos_ok && d <= s.dpos_tol;
    rep.checks["d_pos"] = dpos_ok;
    if (s.oracle_enabled) {
        rep.checks["oracle"] = *rep.oracle_rel_l2 <= s.oracle_tol;
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    std::ofstream(s.output_dir / "report.json") << report_json(rep) << '\n';
    return rep;
}

std::string report_json(const ScenarioReport& r) {
    nlohmann::ordered_json j;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["scenario"] = r.scenario;
    j["q_plus"] = r.q_plus;
    j["converged"] = r.converged;
    j["F_residual"] = r.F_residual;
    j["energy_drift_rel"] = r.energy_drift_rel;
    j["huygens_max_abs"] = r.huygens_max_abs;
    j["lambda_margin"] = r.lambda_margin;
    j["oracle_rel_l2"] = opt(r.oracle_rel_l2);
    j["oracle_rel_l2_cone_excluded"] = opt(r.oracle_rel_l2_cone_excluded);
    j["wall_seconds"] = r.wall_seconds;
    j["lambda"] = r.lambda;
    j["truncation_activated"] = r.truncation_activated;
    auto& dp = j["d_pos"] = nlohmann::ordered_json::array();
    for (const auto& [R, d] : r.d_pos) dp.push_back({{"radius", R}, {"value", d}});
    j["checks"] = r.checks;
    j["passed"] = r.passed();
    j["diagnostics"] = r.diagnostics;
    return j.dump(2);
}

} // namespace pointwave
