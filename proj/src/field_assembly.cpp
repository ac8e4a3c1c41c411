#include "pointwave/field_assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pointwave/errors.hpp"
#include "pointwave/kernels.hpp"
#include "pointwave/quadrature.hpp"

namespace pointwave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::vector<double> cone_breakpoints(const FreeWave& wave, double t) {
    std::vector<double> b{t};
    for (double k : wave.kink_times()) {
        b.push_back(t + k);
        b.push_back(std::abs(t - k));
    }
    return b;
}

// Field pieces scaled by r, which stay bounded as r -> 0.
struct ScaledField {
    double r_psi_reg;   // r (psi - zeta(t) G)
    double r_psi_reg_r; // r d/dr (psi - zeta(t) G)
    double r_psi_dot;   // r psi_t
};

ScaledField scaled_field(const FreeWave& wave, const ZetaHistory* history, double zeta_t,
                         double r, double t) {
    const DispersiveSample f = dispersive_eval(wave, r, t);
    ScaledField out{};
    out.r_psi_dot = r * f.psi_dot;
    out.r_psi_reg = r * f.psi - zeta_t / kFourPi;
    out.r_psi_reg_r = r * f.psi_r + zeta_t / (kFourPi * r);
    if (history && t >= r) {
        const double theta = t == r ? 0.5 : 1.0;
        const ZetaSample z = history->at(t - r);
        out.r_psi_dot += theta * z.zeta_dot / kFourPi;
        // r psi_S - zeta(t)/(4 pi) and r d/dr psi_S + zeta(t)/(4 pi r), grouped to cancel.
        out.r_psi_reg = r * f.psi + (theta * z.zeta - zeta_t) / kFourPi;
        out.r_psi_reg_r =
            r * f.psi_r - theta * z.zeta_dot / kFourPi + (zeta_t - theta * z.zeta) / (kFourPi * r);
    }
    return out;
}

template <std::size_t K, class F>
std::array<double, K> adaptive_integral(std::vector<quadrature::Panel> panels, double tol,
                                        F&& integrand, int& refinements) {
    auto current = kernels::integrate_panels<K>(panels, integrand);
    constexpr int kMaxLevels = 8;
    for (int level = 0; level < kMaxLevels; ++level) {
        panels = quadrature::refine(panels);
        const auto finer = kernels::integrate_panels<K>(panels, integrand);
        double diff = 0.0, size = 0.0;
        for (std::size_t c = 0; c < K; ++c) {
            diff += std::abs(finer[c] - current[c]);
            size += std::abs(finer[c]);
        }
        refinements = level + 1;
        current = finer;
        if (diff <= tol * std::max(1.0, size)) {
            return current;
        }
    }
    std::ostringstream os;
    os << "radial quadrature did not reach tolerance " << tol << " after " << kMaxLevels
       << " panel halvings";
    throw NumericalError(os.str());
}

EnergyReport energy_core(const InitialState& state, const FreeWave& wave,
                         const ZetaHistory* history, double t, double zeta_t, double R_quad,
                         double quad_tol) {
    if (state.pi().tail() != 0.0) {
        throw DomainError("kinetic energy is infinite for a velocity with a Coulomb tail");
    }
    if (R_quad < t + state.support_radius()) {
        throw DomainError("energy quadrature radius must cover t + support radius");
    }
    auto integrand = [&](double r) -> std::array<double, 2> {
        const ScaledField s = scaled_field(wave, history, zeta_t, r, t);
        // 4 pi r^2 * (1/2) g^2 = 2 pi (r g)^2
        return {2.0 * std::numbers::pi * s.r_psi_dot * s.r_psi_dot,
                2.0 * std::numbers::pi * s.r_psi_reg_r * s.r_psi_reg_r};
    };
    const auto breaks = cone_breakpoints(wave, t);
    EnergyReport rep;
    rep.t = t;
    const auto parts = adaptive_integral<2>(quadrature::build_panels(0.0, R_quad, breaks, 1.0 / 16.0),
                                            quad_tol, integrand, rep.refinements);
    const double mismatch = state.phi().tail() - zeta_t;
    rep.tail_correction = 0.5 * mismatch * mismatch / (kFourPi * R_quad);
    rep.kinetic = parts[0];
    rep.gradient = parts[1] + rep.tail_correction;
    rep.potential = state.nonlinearity().potential(zeta_t);
    rep.total = rep.kinetic + rep.gradient + rep.potential;
    return rep;
}

} // namespace

SingularSample psi_singular(const ZetaHistory& history, double r, double t) {
    if (!(r > 0.0)) {
        throw DomainError("psi_singular requires r > 0");
    }
    if (t < r) return {};
    const double theta = t == r ? 0.5 : 1.0;
    const ZetaSample z = history.at(t - r);
    const double g = 1.0 / (kFourPi * r);
    return {theta * z.zeta * g, theta * z.zeta_dot * g,
            theta * (-z.zeta_dot * g - z.zeta * g / r)};
}

FieldSample psi_total(const FreeWave& wave, const ZetaHistory& history, double r, double t) {
    const DispersiveSample f = dispersive_eval(wave, r, t);
    const SingularSample s = psi_singular(history, r, t);
    const double zeta_t = history.at(t).zeta;
    const ScaledField sc = scaled_field(wave, &history, zeta_t, r, t);
    FieldSample out;
    out.r = r;
    out.t = t;
    out.psi_f = f.psi;
    out.psi_f_dot = f.psi_dot;
    out.psi_s = s.psi;
    out.psi_s_dot = s.psi_dot;
    out.psi = f.psi + s.psi;
    out.psi_dot = f.psi_dot + s.psi_dot;
    out.psi_reg = sc.r_psi_reg / r;
    out.psi_reg_r = sc.r_psi_reg_r / r;
    out.on_cone = f.on_cone;
    return out;
}

FieldSample psi_total(const InitialState& state, const ZetaHistory& history, double r, double t) {
    return psi_total(FreeWave(state), history, r, t);
}

double regular_trace(const InitialState& state, const ZetaHistory& history, double t) {
    if (!(t > 0.0)) {
        throw DomainError("regular_trace requires t > 0");
    }
    const FreeWave wave(state);
    const std::array<double, 3> radii{1e-2, 1e-3, 1e-4};
    std::array<double, 3> values{};
    const double zeta_t = history.at(t).zeta;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        values[i] = scaled_field(wave, &history, zeta_t, radii[i], t).r_psi_reg / radii[i];
    }
    // Quadratic through the three samples, evaluated at r = 0.
    double out = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < 3; ++j) {
            if (j != i) w *= radii[j] / (radii[j] - radii[i]);
        }
        out += w * values[i];
    }
    return out;
}

EnergyReport energy(const InitialState& state, const ZetaHistory& history, double t,
                    double R_quad, double quad_tol) {
    if (t == 0.0) {
        return energy_core(state, FreeWave(state), nullptr, 0.0, state.zeta0(), R_quad, quad_tol);
    }
    return energy_core(state, FreeWave(state), &history, t, history.at(t).zeta, R_quad, quad_tol);
}

EnergyReport initial_energy(const InitialState& state, double quad_tol) {
    return energy_core(state, FreeWave(state), nullptr, 0.0, state.zeta0(),
                       state.support_radius() + 1.0, quad_tol);
}

std::pair<double, double> distance_to_stationary(const InitialState& state,
                                                 const ZetaHistory& history, double t, double q,
                                                 double R) {
    if (!(R > 0.0)) {
        throw DomainError("distance_to_stationary requires R > 0");
    }
    const FreeWave wave(state);
    const double zeta_t = history.at(t).zeta;
    auto integrand = [&](double r) -> std::array<double, 2> {
        const ScaledField s = scaled_field(wave, &history, zeta_t, r, t);
        // r (psi - q G) = r psi_reg + (zeta(t) - q) / (4 pi)
        const double dp = s.r_psi_reg + (zeta_t - q) / kFourPi;
        return {kFourPi * dp * dp, kFourPi * s.r_psi_dot * s.r_psi_dot};
    };
    int refinements = 0;
    const auto parts = adaptive_integral<2>(
        quadrature::build_panels(0.0, R, cone_breakpoints(wave, t), 1.0 / 16.0), 1e-12,
        integrand, refinements);
    return {std::sqrt(std::max(parts[0], 0.0)), std::sqrt(std::max(parts[1], 0.0))};
}

std::vector<FieldSample> field_snapshot(const InitialState& state, const ZetaHistory& history,
                                        double t, double R, std::size_t n) {
    const FreeWave wave(state);
    std::vector<double> radii(n);
    for (std::size_t k = 0; k < n; ++k) {
        radii[k] = R * static_cast<double>(k + 1) / static_cast<double>(n);
    }
    std::vector<FieldSample> out(n);
    kernels::evaluate_points<FieldSample>(radii, out, [&](double r) {
        return psi_total(wave, history, r, t);
    });
    return out;
}

} // namespace pointwave
