// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [config_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pointwave/fd_oracle.hpp"
#include "pointwave/field_assembly.hpp"
#include "pointwave/free_wave.hpp"
#include "pointwave/scenario.hpp"
#include "pointwave/zeta_dynamics.hpp"

#ifndef PW_CONFIG_DIR
#define PW_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace pointwave;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
    double limit_seconds = 0.0; // 0: no runtime limit
};

void append(std::string& s, const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    if (!s.empty()) s += "; ";
    s += buf;
}

InitialState reference_state(double sign = 1.0) {
    const auto cubic = Nonlinearity::cubic();
    const double z0 = 0.5 * sign;
    return make_initial_state(RadialProfile::bump(cubic.force(z0), 1.0), RadialProfile::zero(), z0,
                              0.3 * sign, cubic);
}

struct Solved {
    InitialState state;
    TruncatedNonlinearity trunc;
    ZetaHistory history;
    double E0;
};

Solved solve(const InitialState& state, double T, const ODEConfig& base = {}) {
    const double E0 = initial_energy(state).total;
    auto trunc = build_truncation(state.nonlinearity(), lambda_bound(state.nonlinearity(), E0));
    ODEConfig cfg = base;
    cfg.T_final = T;
    auto hist = integrate(state, trunc, cfg);
    return {state, std::move(trunc), std::move(hist), E0};
}

double drift(const Solved& s, double t) {
    const double Et = energy(s.state, s.history, t, t + s.state.support_radius() + 1.0).total;
    return std::abs(Et - s.E0) / (s.E0 != 0.0 ? std::abs(s.E0) : 1.0);
}

Outcome stationary_persistence() {
    Outcome o;
    o.limit_seconds = 5.0;
    const auto cubic = Nonlinearity::cubic();
    for (double q : {-1.0, 0.0, 1.0}) {
        const auto s = solve(stationary_data(q, cubic), 50.0);
        double zmax = 0.0;
        for (int k = 0; k <= 5000; ++k) {
            zmax = std::max(zmax, std::abs(s.history.at(50.0 * k / 5000.0).zeta - q));
        }
        for (double v : s.history.values()) zmax = std::max(zmax, std::abs(v - q));
        double pmax = 0.0;
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                const double r = 0.1 + 0.55 * i;
                const double t = 0.5 + 5.5 * j;
                pmax = std::max(pmax, std::abs(psi_total(s.state, s.history, r, t).psi - q * green(r)));
            }
        }
        o.pass = o.pass && zmax <= 1e-10 && pmax <= 1e-12;
        append(o.detail, "q=%g: max|zeta-q|=%.2e max|psi-qG|=%.2e", q, zmax, pmax);
    }
    return o;
}

Outcome energy_conservation() {
    Outcome o;
    o.limit_seconds = 30.0;
    const double times[] = {1.0, 5.0, 10.0, 20.0};
    std::vector<double> worst;
    for (double tol : {1e-8, 1e-9, 1e-10, 1e-11, 1e-12}) {
        ODEConfig cfg;
        cfg.rel_tol = tol;
        cfg.abs_tol = tol * 1e-2;
        const auto s = solve(reference_state(), 20.0, cfg);
        double w = 0.0;
        for (double t : times) w = std::max(w, drift(s, t));
        worst.push_back(w);
        append(o.detail, "tol %.0e: %.3e", tol, w);
        o.pass = o.pass && (tol != 1e-10 || w <= 1e-6);
    }
    bool strict = true;
    for (std::size_t k = 1; k < worst.size(); ++k) {
        o.pass = o.pass && worst[k] <= worst[k - 1];
        strict = strict && worst[k] < worst[k - 1];
    }
    // With the step cap the step error is already below the dense-output interpolation floor.
    if (!strict) o.detail += "; non-increasing, saturated at the dense-output floor";
    return o;
}

Outcome strong_huygens() {
    Outcome o;
    o.limit_seconds = 10.0;
    const auto zero = Nonlinearity::polynomial({0.0}, "zero");
    const auto ref = reference_state();
    double closed = 0.0;
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double r = 0.02 + 0.2 * i;
            const double t = r + 2.0 + 0.4 * j;
            closed = std::max(closed, std::abs(psi_G_eval(ref, r, t)));
        }
    }
    append(o.detail, "closed form max=%.2e", closed);
    o.pass = closed <= 1e-13;

    const auto singular = make_initial_state(RadialProfile::zero(), RadialProfile::zero(),
                                             ref.zeta0(), ref.zeta_dot0(), zero);
    const auto tr = build_truncation(zero, 1.0);
    const double h = 8.0 / 512.0;
    const double snaps[] = {10.0};
    const auto run = oracle::run(singular, tr, 10.0, h, 13.0, snaps, oracle::Boundary::Free);
    double fd = 0.0;
    const auto& u = run.snapshots.front().u;
    for (std::size_t j = 1; j < u.size(); ++j) {
        const double r = static_cast<double>(j) * h;
        if (10.0 >= r + 2.0) fd = std::max(fd, std::abs(u[j] / r));
    }
    append(o.detail, "oracle max=%.2e (h^2=%.2e)", fd, h * h);
    o.pass = o.pass && fd <= h * h;
    return o;
}

Outcome trace_support() {
    Outcome o;
    const auto ref = reference_state();
    const FreeWave wave(ref);
    double worst = 0.0;
    for (int k = 1; k <= 4800; ++k) {
        worst = std::max(worst, std::abs(wave.trace(2.0 + 48.0 * k / 4800.0)));
    }
    append(o.detail, "max|lambda| on (2,50]=%.2e", worst);
    o.pass = worst <= 1e-12;
    return o;
}

Outcome global_attraction() {
    Outcome o;
    o.limit_seconds = 60.0;
    const auto cubic = Nonlinearity::cubic();
    for (double sign : {1.0, -1.0}) {
        // Once zeta sits within a few ulps of q the distance is pure rounding,
        // delta sqrt(R / 4 pi) with delta = 64 eps |q|, and cannot decrease further.
        const double floor = 64.0 * 2.220446049250313e-16 * std::abs(sign) * std::sqrt(2.0 / kFourPi);
        const auto s = solve(reference_state(sign), 50.0);
        const auto lim = detect_limit(s.history, cubic);
        const double F50 = std::abs(cubic.force(s.history.at(50.0).zeta));
        const double q = sign;
        double d[3];
        const double ts[] = {2.0, 10.0, 50.0};
        for (int k = 0; k < 3; ++k) d[k] = distance_to_stationary(s.state, s.history, ts[k], q, 2.0).first;
        bool decreasing = true;
        for (int k = 1; k < 3; ++k) decreasing = decreasing && (d[k] < d[k - 1] || d[k] <= floor);
        const bool ok = lim.converged && std::abs(lim.q_plus - q) <= 1e-6 && F50 <= 1e-8 &&
                        d[2] <= 1e-3 && decreasing;
        o.pass = o.pass && ok;
        append(o.detail, "zeta0=%+.1f -> q+=%g |F|=%.1e", 0.5 * sign, lim.q_plus, F50);
        append(o.detail, "d_pos(2,10,50)=%.3e,%.3e,%.3e", d[0], d[1], d[2]);
    }
    return o;
}

Outcome a_priori_bound(const fs::path& dir) {
    Outcome o;
    std::vector<fs::path> cfgs;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".cfg") cfgs.push_back(e.path());
    }
    std::sort(cfgs.begin(), cfgs.end());
    if (cfgs.empty()) {
        o.pass = false;
        o.detail = "no configs in " + dir.string();
        return o;
    }
    double min_margin = 1e300;
    for (const auto& p : cfgs) {
        const Scenario sc = load_config(p);
        const auto fwd = build_state(sc);
        const auto state = sc.backward ? fwd.time_reversed() : fwd;
        ODEConfig cfg = sc.ode;
        const auto s = solve(state, sc.T_final, cfg);
        double zmax = 0.0;
        for (double v : s.history.values()) zmax = std::max(zmax, std::abs(v));
        const double margin = s.trunc.lambda() - zmax;
        min_margin = std::min(min_margin, margin);
        o.pass = o.pass && margin > 0.0 && !s.history.truncation_activated();
        if (margin <= 0.0 || s.history.truncation_activated()) {
            o.detail += sc.name + " violates; ";
        }
    }
    append(o.detail, "%g configs, min margin=%.4g", static_cast<double>(cfgs.size()), min_margin);
    return o;
}

Outcome boundary_identity() {
    Outcome o;
    const auto s = solve(reference_state(), 50.0);
    const FreeWave wave(s.state);
    const auto& F = s.state.nonlinearity();
    double a = 0.0, b = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const double t = 50.0 * k / 50.0 - 0.37;
        const auto z = s.history.at(t);
        const double tr = regular_trace(s.state, s.history, t);
        a = std::max(a, std::abs(tr - F.force(z.zeta)));
        b = std::max(b, std::abs(tr - (wave.trace(t) - z.zeta_dot / kFourPi)));
    }
    append(o.detail, "max|trace-F|=%.2e max|trace-(lambda-zeta'/4pi)|=%.2e", a, b);
    o.pass = a <= 1e-6 && b <= 1e-6;
    return o;
}

Outcome ode_closed_form() {
    Outcome o;
    const auto lin = Nonlinearity::linear();
    const auto tr = build_truncation(lin, 2.0);
    ODEConfig cfg;
    cfg.T_final = 1.0;
    const auto h = integrate_source([](double) { return 0.0; }, {}, 1.0, tr, cfg);
    double worst = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        const double t = k / 10000.0;
        worst = std::max(worst, std::abs(h.at(t).zeta - std::exp(-kFourPi * t)));
    }
    append(o.detail, "max|zeta-exp(-4 pi t)| on [0,1]=%.2e", worst);
    o.pass = worst <= 1e-8;
    return o;
}

Outcome oracle_agreement() {
    Outcome o;
    o.limit_seconds = 120.0;
    const auto s = solve(reference_state(), 12.0);
    const double t = 10.0;
    const double R = s.state.support_radius() + t + 1.0;
    const double snaps[] = {t};
    double cut[2];
    const double hs[] = {8.0 / 4096.0, 4.0 / 4096.0};
    for (int k = 0; k < 2; ++k) {
        const auto run = oracle::run(s.state, s.trunc, t, hs[k], R, snaps);
        const auto c = oracle::compare(s.state, s.history, run, t, 8.0);
        cut[k] = c.rel_l2_cone_excluded;
        append(o.detail, "h=%.3g: rel_l2=%.2e cone-excluded=%.2e", hs[k], c.rel_l2, c.rel_l2_cone_excluded);
        if (k == 0) o.pass = o.pass && c.rel_l2 <= 1e-3;
    }
    const double ratio = cut[1] / cut[0];
    append(o.detail, "ratio=%.3f", ratio);
    o.pass = o.pass && ratio >= 0.2 && ratio <= 0.35;
    return o;
}

Outcome lyapunov_decay() {
    Outcome o;
    const auto s = solve(reference_state(), 50.0);
    const auto& nl = s.state.nonlinearity();
    const double Tstar = s.state.support_radius();
    const auto times = s.history.times();
    const auto vals = s.history.values();
    double worst = -1e300;
    std::size_t steps = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i - 1] < Tstar) continue;
        worst = std::max(worst, nl.potential(vals[i]) - nl.potential(vals[i - 1]));
        ++steps;
    }
    append(o.detail, "T*=%g, %g steps, max U increase=%.2e", Tstar, static_cast<double>(steps), worst);
    o.pass = steps > 0 && worst <= 1e-12;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path(PW_CONFIG_DIR);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"stationary persistence", stationary_persistence},
        {"energy conservation", energy_conservation},
        {"strong Huygens", strong_huygens},
        {"trace support", trace_support},
        {"global attraction", global_attraction},
        {"a priori bound", [&] { return a_priori_bound(dir); }},
        {"boundary-condition identity", boundary_identity},
        {"ODE closed form", ode_closed_form},
        {"oracle agreement", oracle_agreement},
        {"Lyapunov decay", lyapunov_decay},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.limit_seconds > 0.0 && secs >= o.limit_seconds) {
            o.pass = false;
            append(o.detail, "runtime limit %.0f s exceeded", o.limit_seconds);
        }
        std::printf("criterion %2zu %-28s %s  (%.1f s)  %s\n", i + 1, criteria[i].first,
                    o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
