#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pointwave/initial_data.hpp"
#include "pointwave/nonlinearity.hpp"
#include "pointwave/zeta_dynamics.hpp"

namespace pointwave::oracle {

// Independent check of the semi-analytic solution: with u = r psi the radial problem is
// u_tt = u_rr on r > 0 with the nonlinear Robin condition u_r(0, t) = F(4 pi u(0, t)).
// Leapfrog at Courant number 1 is exact in the interior, so all discretization error
// sits in the boundary closure.

enum class Boundary {
    PointInteraction, // (-3u0 + 4u1 - u2) / (2h) = F~(4 pi u0), solved by Newton
    Free,             // u(0, t) = 0 for t > 0: free 3D evolution, no point source
};

struct Grid {
    double h = 0.0;
    std::size_t N = 0;
    double R = 0.0;
    std::vector<double> u_prev;
    std::vector<double> u_curr;
    std::size_t n = 0; // index of u_curr's time level
    double dt() const { return h; }
    double time() const { return static_cast<double>(n) * h; }
    /// 4 pi u(0, t_n).
    double zeta() const;
};

/// Levels 0 and 1 (second-order Taylor start). Requires R > support radius + planned_T.
Grid init(const InitialState& state, const TruncatedNonlinearity& nl, double h, double R,
          double planned_T, Boundary boundary = Boundary::PointInteraction);

/// Advances one level. Throws NumericalError when the boundary Newton solve fails.
void step(Grid& grid, const TruncatedNonlinearity& nl,
          Boundary boundary = Boundary::PointInteraction);

struct Snapshot {
    double t;
    std::vector<double> u; // u_j at r_j = j h
};

struct Run {
    double h = 0.0;
    std::vector<double> times;
    std::vector<double> zeta; // 4 pi u0 at every level
    std::vector<Snapshot> snapshots;
};

/// Snapshot times must be multiples of h.
Run run(const InitialState& state, const TruncatedNonlinearity& nl, double T, double h, double R,
        std::span<const double> snapshot_times, Boundary boundary = Boundary::PointInteraction);

struct Comparison {
    double rel_l2 = 0.0;
    /// Same, skipping nodes within 5h of a characteristic carrying a kink.
    double rel_l2_cone_excluded = 0.0;
};

/// Discrete L2(B_R) discrepancy between oracle u/r and the semi-analytic field at time t.
Comparison compare(const InitialState& state, const ZetaHistory& history, const Run& run,
                   double t, double R);

} // namespace pointwave::oracle
