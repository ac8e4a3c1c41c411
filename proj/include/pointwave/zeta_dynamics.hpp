#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pointwave/initial_data.hpp"
#include "pointwave/nonlinearity.hpp"

namespace pointwave {

struct ODEConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Upper step bound; the effective cap is min(max_step, 0.1 / (1 + 4 pi L)) with L the
    /// Lipschitz constant of the truncated force. Non-positive means "cap only".
    double max_step = 0.0;
    double T_final = 50.0;
    std::size_t max_steps = 20'000'000;
};

double effective_step_cap(const ODEConfig& cfg, const TruncatedNonlinearity& nl);

struct ZetaSample {
    double zeta;
    double zeta_dot;
};

/// Accepted steps of the amplitude ODE with cubic Hermite interpolation in between.
class ZetaHistory {
public:
    ZetaHistory() = default;
    /// Nodes must be strictly increasing and start at 0.
    ZetaHistory(std::vector<double> times, std::vector<double> values,
                std::vector<double> derivatives, std::vector<double> sources, double lambda_used);

    static ZetaHistory constant(double q, double horizon);

    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> derivatives() const { return derivatives_; }
    /// Source lambda(t_i) at every node.
    std::span<const double> sources() const { return sources_; }
    double horizon() const { return times_.empty() ? 0.0 : times_.back(); }
    double lambda_used() const { return lambda_used_; }
    /// True when an accepted step evaluated the force outside [-Lambda, Lambda].
    bool truncation_activated() const { return truncation_activated_; }
    void set_truncation_activated(bool v) { truncation_activated_ = v; }
    std::size_t size() const { return times_.size(); }

    /// Throws DomainError for s outside [0, horizon].
    ZetaSample at(double s) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> derivatives_;
    std::vector<double> sources_;
    double lambda_used_ = 0.0;
    bool truncation_activated_ = false;
};

/// 4 pi (lambda - F~(zeta)). Sets *outside when |zeta| exceeds the truncation radius.
double rhs(const TruncatedNonlinearity& nl, double zeta, double lambda, bool* outside = nullptr);

using SourceFn = std::function<double(double)>;

/// Dormand-Prince 5(4) for (1/4 pi) zeta' + F~(zeta) = lambda(t), stepping exactly onto every
/// breakpoint (where lambda loses smoothness). Throws NumericalError on step-size underflow or
/// when an accepted step leaves [-Lambda, Lambda].
ZetaHistory integrate_source(const SourceFn& lambda, std::span<const double> breakpoints,
                             double zeta0, const TruncatedNonlinearity& nl, const ODEConfig& cfg);

/// Integrates with the origin trace of the free evolution of `state` as the source.
ZetaHistory integrate(const InitialState& state, const TruncatedNonlinearity& nl,
                      const ODEConfig& cfg);

ZetaSample zeta_at(const ZetaHistory& history, double s);

struct LimitTolerances {
    double position = 1e-6;
    double force = 1e-8;
    double rate = 1e-8;
};

struct LimitResult {
    double q_plus = 0.0;
    double residual = 0.0;  // |F(zeta(T))|
    double max_rate = 0.0;  // max |zeta'| over the window
    bool converged = false;
    std::string diagnostics;
};

/// Identifies the stationary amplitude approached at the end of the run. `window <= 0`
/// selects min(10, T/5).
LimitResult detect_limit(const ZetaHistory& history, const Nonlinearity& nl, double window = 0.0,
                         const LimitTolerances& tol = {});

} // namespace pointwave
