#pragma once

#include <vector>

#include "pointwave/initial_data.hpp"

namespace pointwave {

/// Odd extension of s -> s psi0(|s|) and the even antiderivative of s -> s pi0(|s|).
/// The G part of the data enters as an exact sign jump of +-zeta0/(4 pi) at s = 0, so
/// nothing is ever sampled near the singularity. At s = 0 the odd functions return the
/// average of their one-sided limits (zero).
class OddReduction {
public:
    explicit OddReduction(const InitialState& state);
    /// Raw components without the compatibility check (used for the cutoff-singular part).
    OddReduction(double zeta0, double zeta_dot0, RadialProfile phi, RadialProfile pi);

    double u0(double s) const;
    /// Derivative of u0 away from s = 0 (the jump's delta is excluded). Even.
    double u0_prime(double s) const;
    double v0(double s) const;
    double v0_prime(double s) const;
    /// Right limit of v0 at s >= 0.
    double v0_right(double s) const { return v0_pos(s); }
    /// Integral of v0 over [0, s]. Even.
    double V(double s) const;

    double support_radius() const { return support_; }

private:
    double u0_pos(double s) const;
    double du0_pos(double s) const;
    double v0_pos(double s) const;
    double dv0_pos(double s) const;
    double V_pos(double s) const;

    double zeta0_;
    double zeta_dot0_;
    RadialProfile phi_;
    RadialProfile pi_;
    double support_;
};

struct DispersiveSample {
    double psi = 0.0;
    double psi_dot = 0.0;
    double psi_r = 0.0;  // radial derivative
    bool on_cone = false; // r == t: one-sided limits were averaged
};

/// Closed-form solution of the free wave equation with the full initial data.
class FreeWave {
public:
    explicit FreeWave(const InitialState& state);
    /// Free evolution of the cutoff-singular part (zeta0 chi G, zeta_dot0 chi G) alone.
    static FreeWave singular_part(const InitialState& state);

    const OddReduction& reduction() const { return reduction_; }
    /// Times at which the origin trace loses smoothness (data kink radii).
    const std::vector<double>& kink_times() const { return kinks_; }

    /// Origin trace for t >= 0, with lambda(0) meaning the right limit lambda(0+).
    double trace(double t) const;

private:
    FreeWave(OddReduction reduction, std::vector<double> kinks);

    OddReduction reduction_;
    std::vector<double> kinks_;
};

/// psi_f(r, t) = [u0(r+t) + u0(r-t) + V(r+t) - V(r-t)] / (2r) and its derivatives.
DispersiveSample dispersive_eval(const FreeWave& wave, double r, double t);

/// lambda(t) = lim_{r->0} psi_f(r, t) = d/dt[t psi0(t)] + t pi0(t), t > 0.
double lambda_trace(const FreeWave& wave, double t);

/// Free evolution of (zeta0 chi G, zeta_dot0 chi G); vanishes identically for t >= r + 2.
double psi_G_eval(const InitialState& state, double r, double t);

/// Local H^2(B_R) + H^1(B_R) size of (psi_f, psi_f_t) at time t, derivatives by
/// fourth-order central differences of step h_fd.
double local_seminorm(const FreeWave& wave, double t, double R, double h_fd = 1e-3);

} // namespace pointwave
