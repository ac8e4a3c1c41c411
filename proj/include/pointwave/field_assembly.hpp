#pragma once

#include <utility>
#include <vector>

#include "pointwave/free_wave.hpp"
#include "pointwave/initial_data.hpp"
#include "pointwave/zeta_dynamics.hpp"

namespace pointwave {

struct SingularSample {
    double psi = 0.0;
    double psi_dot = 0.0;
    double psi_r = 0.0;
};

/// Retarded spherical wave theta(t - r) zeta(t - r) / (4 pi r) and its derivatives.
/// theta(0) = 1/2 so the value on the cone averages the one-sided limits.
SingularSample psi_singular(const ZetaHistory& history, double r, double t);

struct FieldSample {
    double r = 0.0;
    double t = 0.0;
    double psi = 0.0;
    double psi_dot = 0.0;
    double psi_f = 0.0;
    double psi_f_dot = 0.0;
    double psi_s = 0.0;
    double psi_s_dot = 0.0;
    /// psi - zeta(t) G(r)
    double psi_reg = 0.0;
    double psi_reg_r = 0.0;
    bool on_cone = false;
};

/// Total field psi_f + psi_S at (r, t) with the component breakdown.
FieldSample psi_total(const FreeWave& wave, const ZetaHistory& history, double r, double t);
FieldSample psi_total(const InitialState& state, const ZetaHistory& history, double r, double t);

/// lim_{r->0} (psi(r, t) - zeta(t) G(r)) by second-order Richardson extrapolation over
/// r in {1e-2, 1e-3, 1e-4}.
double regular_trace(const InitialState& state, const ZetaHistory& history, double t);

struct EnergyReport {
    double t = 0.0;
    double kinetic = 0.0;         // (1/2) |psi_t|^2
    double gradient = 0.0;        // (1/2) |grad psi_reg|^2, including tail_correction
    double potential = 0.0;       // U(zeta(t))
    double tail_correction = 0.0; // (1/2) (alpha - zeta)^2 / (4 pi R_quad), beyond R_quad
    double total = 0.0;
    int refinements = 0;
};

/// Conserved energy at time t. Requires R_quad >= t + support radius; the field beyond
/// R_quad is alpha G with alpha the position tail, so the remainder is added exactly.
/// Throws NumericalError when panel halving does not reach quad_tol.
EnergyReport energy(const InitialState& state, const ZetaHistory& history, double t,
                    double R_quad, double quad_tol = 1e-12);

/// Energy of the initial data alone (no history needed).
EnergyReport initial_energy(const InitialState& state, double quad_tol = 1e-12);

/// (|psi(t) - q G|_{L2(B_R)}, |psi_t(t)|_{L2(B_R)}).
std::pair<double, double> distance_to_stationary(const InitialState& state,
                                                 const ZetaHistory& history, double t, double q,
                                                 double R);

/// Samples on r_k = k R / n, k = 1..n.
std::vector<FieldSample> field_snapshot(const InitialState& state, const ZetaHistory& history,
                                        double t, double R, std::size_t n);

} // namespace pointwave
