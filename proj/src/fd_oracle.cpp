#include "pointwave/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pointwave/errors.hpp"
#include "pointwave/field_assembly.hpp"
#include "pointwave/free_wave.hpp"
#include "pointwave/kernels.hpp"

namespace pointwave::oracle {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr int kNewtonIterations = 50;

double solve_robin(double guess, double u1, double u2, double h,
                   const TruncatedNonlinearity& nl) {
    double x = guess;
    for (int it = 0; it < kNewtonIterations; ++it) {
        const double g = (-3.0 * x + 4.0 * u1 - u2) / (2.0 * h) - nl.force(kFourPi * x);
        const double dg = -3.0 / (2.0 * h) - kFourPi * nl.force_derivative(kFourPi * x);
        const double dx = g / dg;
        x -= dx;
        if (g == 0.0 || std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) {
            return x;
        }
    }
    std::ostringstream os;
    os << "boundary Newton solve did not converge (last iterate u0 = " << x
       << ", start " << guess << ")";
    throw NumericalError(os.str());
}

void close_boundary(std::vector<double>& next, const std::vector<double>& curr, double h,
                    const TruncatedNonlinearity& nl, Boundary boundary) {
    const std::size_t N = next.size() - 1;
    next[N] = curr[N - 1];
    if (boundary == Boundary::Free) {
        next[0] = 0.0;
    } else {
        next[0] = solve_robin(curr[0], next[1], next[2], h, nl);
    }
}

} // namespace

double Grid::zeta() const { return kFourPi * u_curr[0]; }

Grid init(const InitialState& state, const TruncatedNonlinearity& nl, double h, double R,
          double planned_T, Boundary boundary) {
    if (!(h > 0.0)) {
        throw DomainError("oracle step must be positive");
    }
    if (!(R > state.support_radius() + planned_T)) {
        std::ostringstream os;
        os << "oracle radius " << R << " must exceed support radius + horizon = "
           << state.support_radius() + planned_T;
        throw DomainError(os.str());
    }
    Grid g;
    g.h = h;
    g.N = static_cast<std::size_t>(std::ceil(R / h));
    g.R = static_cast<double>(g.N) * h;
    g.u_prev.assign(g.N + 1, 0.0);
    g.u_curr.assign(g.N + 1, 0.0);

    const auto& phi = state.phi();
    const double z0 = state.zeta0();
    const double alpha = phi.tail();
    g.u_prev[0] = z0 / kFourPi;
    for (std::size_t j = 1; j <= g.N; ++j) {
        const double r = h * static_cast<double>(j);
        g.u_prev[j] = r * state.psi0(r);
    }
    // u(r, h) ~ u + h (r pi0) + h^2/2 u_rr with u_rr = d^2/dr^2 [r psi0] taken analytically.
    for (std::size_t j = 1; j < g.N; ++j) {
        const double r = h * static_cast<double>(j);
        const double u_rr = (z0 - alpha) * cutoff::chi_second(r) / kFourPi + 2.0 * phi.d1(r) +
                            r * phi.d2(r);
        g.u_curr[j] = g.u_prev[j] + h * r * state.pi0(r) + 0.5 * h * h * u_rr;
    }
    close_boundary(g.u_curr, g.u_prev, h, nl, boundary);
    g.n = 1;
    return g;
}

void step(Grid& grid, const TruncatedNonlinearity& nl, Boundary boundary) {
    std::vector<double> next(grid.N + 1, 0.0);
    kernels::leapfrog_interior(grid.u_prev, grid.u_curr, next);
    close_boundary(next, grid.u_curr, grid.h, nl, boundary);
    grid.u_prev = std::move(grid.u_curr);
    grid.u_curr = std::move(next);
    ++grid.n;
}

Run run(const InitialState& state, const TruncatedNonlinearity& nl, double T, double h, double R,
        std::span<const double> snapshot_times, Boundary boundary) {
    std::vector<std::size_t> snap_levels;
    for (double ts : snapshot_times) {
        const double level = std::round(ts / h);
        if (std::abs(level * h - ts) > 1e-9 * std::max(1.0, ts) || ts < 0.0 || ts > T + 1e-12) {
            std::ostringstream os;
            os << "snapshot time " << ts << " is not a grid level in [0, T] for h = " << h;
            throw DomainError(os.str());
        }
        snap_levels.push_back(static_cast<std::size_t>(level));
    }
    const auto levels = static_cast<std::size_t>(std::llround(T / h));

    Grid g = init(state, nl, h, R, T, boundary);
    Run out;
    out.h = h;
    out.times = {0.0, h};
    out.zeta = {kFourPi * g.u_prev[0], g.zeta()};
    auto record = [&](std::size_t level, const std::vector<double>& u) {
        for (std::size_t k = 0; k < snap_levels.size(); ++k) {
            if (snap_levels[k] == level) {
                out.snapshots.push_back({static_cast<double>(level) * h, u});
            }
        }
    };
    record(0, g.u_prev);
    record(1, g.u_curr);
    while (g.n < levels) {
        step(g, nl, boundary);
        out.times.push_back(g.time());
        out.zeta.push_back(g.zeta());
        record(g.n, g.u_curr);
    }
    return out;
}

Comparison compare(const InitialState& state, const ZetaHistory& history, const Run& run,
                   double t, double R) {
    const Snapshot* snap = nullptr;
    for (const auto& s : run.snapshots) {
        if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, t)) snap = &s;
    }
    if (!snap) {
        throw DomainError("oracle run has no snapshot at the requested time");
    }
    const double h = run.h;
    const FreeWave wave(state);

    std::vector<double> loci{t};
    for (double k : state.kink_radii()) {
        loci.push_back(t + k);
        loci.push_back(std::abs(t - k));
    }

    const auto J = std::min(static_cast<std::size_t>(std::floor(R / h + 1e-9)),
                            snap->u.size() - 1);
    std::vector<double> radii(J);
    for (std::size_t j = 1; j <= J; ++j) radii[j - 1] = h * static_cast<double>(j);
    std::vector<double> exact(J);
    kernels::evaluate_points<double>(radii, exact, [&](double r) {
        return r * psi_total(wave, history, r, t).psi;
    });

    std::vector<double> err_all, ref_all, err_cut, ref_cut;
    for (std::size_t j = 1; j <= J; ++j) {
        const double r = radii[j - 1];
        const double e = snap->u[j] - exact[j - 1];
        err_all.push_back(e * e);
        ref_all.push_back(exact[j - 1] * exact[j - 1]);
        const bool near_kink = std::any_of(loci.begin(), loci.end(),
                                           [&](double c) { return std::abs(r - c) < 5.0 * h; });
        if (!near_kink) {
            err_cut.push_back(e * e);
            ref_cut.push_back(exact[j - 1] * exact[j - 1]);
        }
    }
    auto ratio = [](const std::vector<double>& e, const std::vector<double>& r) {
        const double den = quadrature::pairwise_sum(r);
        const double num = quadrature::pairwise_sum(e);
        return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    };
    return {ratio(err_all, ref_all), ratio(err_cut, ref_cut)};
}

} // namespace pointwave::oracle
