#include "pointwave/free_wave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "pointwave/errors.hpp"
#include "pointwave/kernels.hpp"
#include "pointwave/quadrature.hpp"

namespace pointwave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

} // namespace

OddReduction::OddReduction(const InitialState& state)
    : OddReduction(state.zeta0(), state.zeta_dot0(), state.phi(), state.pi()) {}

OddReduction::OddReduction(double zeta0, double zeta_dot0, RadialProfile phi, RadialProfile pi)
    : zeta0_(zeta0),
      zeta_dot0_(zeta_dot0),
      phi_(std::move(phi)),
      pi_(std::move(pi)),
      support_(std::max({cutoff::kOuterRadius, phi_.support_radius(), pi_.support_radius()})) {}

// s psi0(s) = [(zeta0 - a) chi + a] / (4 pi) + s phi(s), a = phi tail.
double OddReduction::u0_pos(double s) const {
    const double a = phi_.tail();
    return ((zeta0_ - a) * cutoff::chi(s) + a) / kFourPi + s * phi_.value(s);
}

double OddReduction::du0_pos(double s) const {
    const double a = phi_.tail();
    return (zeta0_ - a) * cutoff::chi_prime(s) / kFourPi + phi_.value(s) + s * phi_.d1(s);
}

double OddReduction::v0_pos(double s) const {
    const double a = pi_.tail();
    return ((zeta_dot0_ - a) * cutoff::chi(s) + a) / kFourPi + s * pi_.value(s);
}

double OddReduction::dv0_pos(double s) const {
    const double a = pi_.tail();
    return (zeta_dot0_ - a) * cutoff::chi_prime(s) / kFourPi + pi_.value(s) + s * pi_.d1(s);
}

double OddReduction::V_pos(double s) const {
    const double a = pi_.tail();
    return ((zeta_dot0_ - a) * cutoff::chi_integral(s) + a * s) / kFourPi + pi_.moment(s);
}

double OddReduction::u0(double s) const {
    if (s > 0.0) return u0_pos(s);
    if (s < 0.0) return -u0_pos(-s);
    return 0.0;
}

double OddReduction::u0_prime(double s) const { return du0_pos(std::abs(s)); }

double OddReduction::v0(double s) const {
    if (s > 0.0) return v0_pos(s);
    if (s < 0.0) return -v0_pos(-s);
    return 0.0;
}

double OddReduction::v0_prime(double s) const { return dv0_pos(std::abs(s)); }

double OddReduction::V(double s) const { return V_pos(std::abs(s)); }

FreeWave::FreeWave(OddReduction reduction, std::vector<double> kinks)
    : reduction_(std::move(reduction)), kinks_(std::move(kinks)) {}

FreeWave::FreeWave(const InitialState& state)
    : FreeWave(OddReduction(state), state.kink_radii()) {}

FreeWave FreeWave::singular_part(const InitialState& state) {
    return FreeWave(OddReduction(state.zeta0(), state.zeta_dot0(), RadialProfile::zero(),
                                 RadialProfile::zero()),
                    {cutoff::kInnerRadius, cutoff::kOuterRadius});
}

double FreeWave::trace(double t) const {
    if (!(t >= 0.0)) {
        throw DomainError("origin trace requested at negative time");
    }
    // d/dt[t psi0(t)] + t pi0(t) from the right-sided formulas, so t = 0 gives lambda(0+).
    return reduction_.u0_prime(t) + reduction_.v0_right(t);
}

DispersiveSample dispersive_eval(const FreeWave& wave, double r, double t) {
    if (!(r > 0.0)) {
        throw DomainError("dispersive_eval requires r > 0 (use lambda_trace at the origin)");
    }
    if (!(t >= 0.0)) {
        throw DomainError("dispersive_eval requires t >= 0");
    }
    const auto& red = wave.reduction();
    const double a = r + t;
    const double b = r - t;
    const double ua = red.u0(a), ub = red.u0(b);
    const double dua = red.u0_prime(a), dub = red.u0_prime(b);
    const double va = red.v0(a), vb = red.v0(b);
    const double Va = red.V(a), Vb = red.V(b);

    DispersiveSample out;
    const double u = 0.5 * (ua + ub + Va - Vb);
    const double u_r = 0.5 * (dua + dub + va - vb);
    out.psi = u / r;
    out.psi_r = u_r / r - u / (r * r);
    out.psi_dot = 0.5 * (dua - dub + va + vb) / r;
    out.on_cone = std::abs(b) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(r, t);
    return out;
}

double lambda_trace(const FreeWave& wave, double t) {
    if (!(t > 0.0)) {
        throw DomainError("lambda_trace requires t > 0");
    }
    return wave.trace(t);
}

double psi_G_eval(const InitialState& state, double r, double t) {
    return dispersive_eval(FreeWave::singular_part(state), r, t).psi;
}

double local_seminorm(const FreeWave& wave, double t, double R, double h_fd) {
    if (!(R > 0.0) || !(h_fd > 0.0)) {
        throw DomainError("local_seminorm requires R > 0 and h_fd > 0");
    }
    const double eps = 3.0 * h_fd;
    if (R <= eps) return 0.0;

    auto psi = [&](double r) { return dispersive_eval(wave, r, t).psi; };
    auto psi_dot = [&](double r) { return dispersive_eval(wave, r, t).psi_dot; };
    const double h = h_fd;

    auto integrand = [&](double r) -> std::array<double, 1> {
        const double fm2 = psi(r - 2 * h), fm1 = psi(r - h), f0 = psi(r), fp1 = psi(r + h),
                     fp2 = psi(r + 2 * h);
        const double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
        const double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        const double lap = d2 + 2.0 * d1 / r;
        const double g0 = psi_dot(r);
        const double gd1 = (psi_dot(r - 2 * h) - 8 * psi_dot(r - h) + 8 * psi_dot(r + h) -
                            psi_dot(r + 2 * h)) /
                           (12 * h);
        const double w = kFourPi * r * r;
        return {w * (f0 * f0 + d1 * d1 + lap * lap + g0 * g0 + gd1 * gd1)};
    };

    std::vector<double> breaks{t};
    for (double k : wave.kink_times()) {
        breaks.push_back(t + k);
        breaks.push_back(std::abs(t - k));
    }
    const auto panels = quadrature::build_panels(eps, R, breaks, 1.0 / 64.0);
    return std::sqrt(kernels::integrate_panels<1>(panels, integrand)[0]);
}

} // namespace pointwave
