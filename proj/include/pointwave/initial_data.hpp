#pragma once

#include <filesystem>
#include <vector>

#include "pointwave/nonlinearity.hpp"

namespace pointwave {

/// Green's function of -Laplacian in R^3: 1/(4 pi r). Throws DomainError for r <= 0.
double green(double r);

/// Smooth radial cutoff equal to 1 on [0, 1] and 0 on [2, inf):
/// chi(r) = f(2 - r) / (f(2 - r) + f(r - 1)), f(s) = exp(-1/s) for s > 0.
/// It satisfies chi(3 - r) = 1 - chi(r).
namespace cutoff {

inline constexpr double kInnerRadius = 1.0;
inline constexpr double kOuterRadius = 2.0;

double chi(double r);
double chi_prime(double r);
double chi_second(double r);
/// Integral of chi over [0, s] for s >= 0; equals 1.5 for s >= 2.
double chi_integral(double s);

} // namespace cutoff

/// Compactly supported radial bump (polynomial A (1 - r^2/rho^2)^3 or a clamped cubic
/// spline) plus an optional Coulomb tail alpha (1 - chi(r)) G(r).
class RadialProfile {
public:
    static RadialProfile zero();
    static RadialProfile bump(double amplitude, double radius);
    /// Clamped cubic spline with zero end slopes. Requires r[0] = 0, strictly increasing r,
    /// and v.back() = 0; the profile vanishes beyond r.back().
    static RadialProfile spline(std::vector<double> r, std::vector<double> v);
    /// Two-column "r value" text file; '#' starts a comment.
    static RadialProfile load_spline(const std::filesystem::path& path);

    RadialProfile with_tail(double alpha) const;
    RadialProfile scaled(double c) const;

    // Bump part and its radial derivatives (no tail).
    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;
    /// Integral of sigma * value(sigma) over [0, s].
    double moment(double s) const;

    double support_radius() const { return support_; }
    double tail() const { return tail_; }
    /// value(r) + tail * (1 - chi(r)) G(r), r > 0.
    double total(double r) const;

private:
    enum class Kind { Zero, Bump, Spline };

    struct Segment {
        double x0;
        double c[4];
    };

    const Segment* segment_for(double r) const;

    Kind kind_ = Kind::Zero;
    double amplitude_ = 0.0;
    double support_ = 0.0;
    double tail_ = 0.0;
    double scale_ = 1.0;
    std::vector<Segment> segments_;
    std::vector<double> moment_table_;
};

/// Radial initial data (psi0, pi0) = (zeta0 chi G + phi, zeta_dot0 chi G + pi), where the
/// regular parts satisfy phi(0) = F(zeta0).
class InitialState {
public:
    const RadialProfile& phi() const { return phi_; }
    const RadialProfile& pi() const { return pi_; }
    double zeta0() const { return zeta0_; }
    double zeta_dot0() const { return zeta_dot0_; }
    const Nonlinearity& nonlinearity() const { return nl_; }
    /// max(2, rho_phi, rho_pi).
    double support_radius() const { return support_radius_; }
    bool tail_free() const { return phi_.tail() == 0.0 && pi_.tail() == 0.0; }
    /// Radii where the data loses smoothness: 1, 2 and the bump radii.
    std::vector<double> kink_radii() const;

    double psi0(double r) const;
    double pi0(double r) const;
    /// psi0 - zeta0 G.
    double psi0_regular(double r) const;

    /// Same data with the velocity negated; evolving it forward is the backward evolution.
    InitialState time_reversed() const;

    friend InitialState make_initial_state(RadialProfile phi, RadialProfile pi, double zeta0,
                                           double zeta_dot0, Nonlinearity nl, double tol);

private:
    InitialState(RadialProfile phi, RadialProfile pi, double zeta0, double zeta_dot0,
                 Nonlinearity nl);

    RadialProfile phi_;
    RadialProfile pi_;
    double zeta0_;
    double zeta_dot0_;
    Nonlinearity nl_;
    double support_radius_;
};

/// Validates phi(0) = F(zeta0) to tol * max(1, |F(zeta0)|); throws CompatibilityError otherwise.
InitialState make_initial_state(RadialProfile phi, RadialProfile pi, double zeta0,
                                double zeta_dot0, Nonlinearity nl, double tol = 1e-10);

/// psi0 = q G exactly, pi0 = 0. Requires |F(q)| <= tol.
InitialState stationary_data(double q, const Nonlinearity& nl, double tol = 1e-10);

/// Phase-space norm squared:
/// |grad psi_reg|^2 + |Lap psi_reg|^2 + |grad pi_reg|^2 + zeta0^2 + zeta_dot0^2.
/// Only defined for tail-free data.
double phase_norm(const InitialState& state);

} // namespace pointwave
