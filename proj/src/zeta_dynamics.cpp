#include "pointwave/zeta_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "pointwave/errors.hpp"
#include "pointwave/free_wave.hpp"

namespace pointwave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

constexpr double kBoundSlack = 1e-9;

} // namespace

double effective_step_cap(const ODEConfig& cfg, const TruncatedNonlinearity& nl) {
    const double cap = 0.1 / (1.0 + kFourPi * nl.lipschitz_constant());
    return cfg.max_step > 0.0 ? std::min(cfg.max_step, cap) : cap;
}

ZetaHistory::ZetaHistory(std::vector<double> times, std::vector<double> values,
                         std::vector<double> derivatives, std::vector<double> sources,
                         double lambda_used)
    : times_(std::move(times)),
      values_(std::move(values)),
      derivatives_(std::move(derivatives)),
      sources_(std::move(sources)),
      lambda_used_(lambda_used) {
    if (times_.empty() || times_.front() != 0.0) {
        throw DomainError("history must start at t = 0");
    }
    if (values_.size() != times_.size() || derivatives_.size() != times_.size() ||
        sources_.size() != times_.size()) {
        throw DomainError("history arrays differ in length");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw DomainError("history times must be strictly increasing");
        }
    }
}

ZetaHistory ZetaHistory::constant(double q, double horizon) {
    return ZetaHistory({0.0, horizon}, {q, q}, {0.0, 0.0}, {0.0, 0.0}, std::abs(q));
}

ZetaSample ZetaHistory::at(double s) const {
    if (times_.empty() || s < 0.0 || s > times_.back()) {
        std::ostringstream os;
        os << "amplitude history queried at " << s << " outside [0, " << horizon() << "]";
        throw DomainError(os.str());
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), s);
    if (it == times_.end()) {
        return {values_.back(), derivatives_.back()};
    }
    const auto i = static_cast<std::size_t>(it - times_.begin()) - 1;
    if (s == times_[i]) {
        return {values_[i], derivatives_[i]};
    }
    const double h = times_[i + 1] - times_[i];
    const double th = (s - times_[i]) / h;
    const double th2 = th * th, th3 = th2 * th;
    const double y0 = values_[i], y1 = values_[i + 1];
    const double d0 = derivatives_[i], d1 = derivatives_[i + 1];
    const double value = (2 * th3 - 3 * th2 + 1) * y0 + (th3 - 2 * th2 + th) * h * d0 +
                         (-2 * th3 + 3 * th2) * y1 + (th3 - th2) * h * d1;
    const double slope = ((6 * th2 - 6 * th) * y0 + (3 * th2 - 4 * th + 1) * h * d0 +
                          (-6 * th2 + 6 * th) * y1 + (3 * th2 - 2 * th) * h * d1) /
                         h;
    return {value, slope};
}

double rhs(const TruncatedNonlinearity& nl, double zeta, double lambda, bool* outside) {
    if (outside && !nl.inside(zeta)) {
        *outside = true;
    }
    return kFourPi * (lambda - nl.force(zeta));
}

ZetaHistory integrate_source(const SourceFn& lambda, std::span<const double> breakpoints,
                             double zeta0, const TruncatedNonlinearity& nl, const ODEConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.T_final > 0.0)) {
        throw DomainError("ODE tolerances and final time must be positive");
    }
    if (!nl.inside(zeta0)) {
        throw NumericalError("initial amplitude lies outside the amplitude bound");
    }
    const double T = cfg.T_final;
    const double cap = effective_step_cap(cfg, nl);

    std::vector<double> stops;
    for (double b : breakpoints) {
        if (b > 0.0 && b < T) stops.push_back(b);
    }
    stops.push_back(T);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    std::vector<double> ts{0.0}, zs{zeta0}, ds, ls;
    double t = 0.0;
    double y = zeta0;
    double lam = lambda(0.0);
    double k1 = rhs(nl, y, lam);
    ds.push_back(k1);
    ls.push_back(lam);

    double h = std::min(cap, 1e-3);
    std::size_t stop_index = 0;
    std::size_t steps = 0;

    bool stage_outside = false;
    bool truncation_activated = false;
    auto f = [&](double tt, double yy) { return rhs(nl, yy, lambda(tt), &stage_outside); };

    while (t < T) {
        const double next_stop = stops[stop_index];
        bool hit_stop = false;
        double step = std::min(h, cap);
        if (t + step >= next_stop - 1e-13 * std::max(1.0, next_stop)) {
            step = next_stop - t;
            hit_stop = true;
        }
        if (step < 1e-14 * std::max(1.0, t)) {
            std::ostringstream os;
            os << "step size underflow at t = " << t;
            throw NumericalError(os.str());
        }
        if (++steps > cfg.max_steps) {
            throw NumericalError("maximum number of ODE steps exceeded");
        }

        stage_outside = false;
        const double k2 = f(t + c2 * step, y + step * (a21 * k1));
        const double k3 = f(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
        const double k4 = f(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 =
            f(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 =
            f(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double t_new = hit_stop ? next_stop : t + step;
        const double lam_new = lambda(t_new);
        const double k7 = rhs(nl, y_new, lam_new, &stage_outside);

        const double err =
            step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y), std::abs(y_new));
        const double ratio = std::abs(err) / scale;

        if (ratio <= 1.0) {
            if (std::abs(y_new) > nl.lambda() + kBoundSlack) {
                std::ostringstream os;
                os << "amplitude " << y_new << " at t = " << t_new
                   << " exceeds the a priori bound " << nl.lambda()
                   << "; the energy input is inconsistent";
                throw NumericalError(os.str());
            }
            truncation_activated = truncation_activated || stage_outside;
            t = t_new;
            y = y_new;
            k1 = k7;
            ts.push_back(t);
            zs.push_back(y);
            ds.push_back(k7);
            ls.push_back(lam_new);
            if (hit_stop) ++stop_index;
            const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
            h = step * grow;
        } else {
            h = step * std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 1.0);
        }
    }
    ZetaHistory history(std::move(ts), std::move(zs), std::move(ds), std::move(ls), nl.lambda());
    history.set_truncation_activated(truncation_activated);
    return history;
}

ZetaHistory integrate(const InitialState& state, const TruncatedNonlinearity& nl,
                      const ODEConfig& cfg) {
    const FreeWave wave(state);
    return integrate_source([&wave](double t) { return wave.trace(t); }, wave.kink_times(),
                            state.zeta0(), nl, cfg);
}

ZetaSample zeta_at(const ZetaHistory& history, double s) { return history.at(s); }

LimitResult detect_limit(const ZetaHistory& history, const Nonlinearity& nl, double window,
                         const LimitTolerances& tol) {
    LimitResult out;
    const double T = history.horizon();
    if (history.size() < 2) {
        out.diagnostics = "history too short";
        return out;
    }
    if (!(window > 0.0)) window = std::min(10.0, T / 5.0);
    const double start = T - window;

    const auto ts = history.times();
    const auto zs = history.values();
    const auto ds = history.derivatives();
    const auto first = static_cast<std::size_t>(
        std::lower_bound(ts.begin(), ts.end(), start) - ts.begin());

    double sum = 0.0;
    double max_rate = 0.0;
    std::size_t count = 0;
    std::size_t sign_changes = 0;
    std::vector<double> peaks;
    double run_peak = 0.0;
    for (std::size_t i = first; i < ts.size(); ++i) {
        sum += zs[i];
        ++count;
        max_rate = std::max(max_rate, std::abs(ds[i]));
        run_peak = std::max(run_peak, std::abs(ds[i]));
        if (i > first && ((ds[i] > 0.0 && ds[i - 1] < 0.0) || (ds[i] < 0.0 && ds[i - 1] > 0.0))) {
            ++sign_changes;
            peaks.push_back(run_peak);
            run_peak = 0.0;
        }
    }
    const double mean = sum / static_cast<double>(count);
    out.max_rate = max_rate;

    const auto [lo_it, hi_it] = std::minmax_element(zs.begin(), zs.end());
    const RootSet roots = find_roots(nl, *lo_it - 1.0, *hi_it + 1.0, 1e-13);
    const double zT = zs.back();
    out.residual = std::abs(nl.force(zT));
    if (roots.empty()) {
        out.diagnostics = "no zero of F near the trajectory";
        return out;
    }
    out.q_plus = roots.nearest(mean).value;

    // Rate must not grow across the window.
    const std::size_t mid = first + (ts.size() - first) / 2;
    double early = 0.0, late = 0.0;
    for (std::size_t i = first; i < ts.size(); ++i) {
        double& slot = i < mid ? early : late;
        slot = std::max(slot, std::abs(ds[i]));
    }
    const bool decaying = late <= early || late <= tol.rate;

    bool oscillating = false;
    if (sign_changes >= 2 && peaks.size() >= 2) {
        oscillating = peaks.back() >= peaks.front() && max_rate > tol.rate;
    }

    out.converged = std::abs(zT - out.q_plus) <= tol.position && out.residual <= tol.force &&
                    max_rate <= tol.rate && decaying && !oscillating;

    std::ostringstream os;
    if (oscillating) {
        os << "amplitude oscillates without decay over the final window (" << sign_changes
           << " sign changes of zeta'); zeros of F may fill an interval";
    } else if (!out.converged) {
        os << "not converged: |zeta(T) - q| = " << std::abs(zT - out.q_plus)
           << ", |F(zeta(T))| = " << out.residual << ", max |zeta'| = " << max_rate;
    }
    out.diagnostics = os.str();
    return out;
}

} // namespace pointwave
