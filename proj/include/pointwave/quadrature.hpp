#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace pointwave::quadrature {

inline constexpr std::size_t kGaussOrder = 10;

/// Nodes and weights of the Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::array<double, kGaussOrder> nodes;
    std::array<double, kGaussOrder> weights;
};

const GaussRule& gauss_legendre();

struct Panel {
    double lo;
    double hi;
};

/// Splits [lo, hi] at the given breakpoints (values outside the interval are ignored,
/// near-duplicates within `merge_tol` are merged), then subdivides every piece into
/// equal panels of width at most `max_width`.
std::vector<Panel> build_panels(double lo, double hi, std::span<const double> breakpoints,
                                double max_width, double merge_tol = 1e-9);

/// Halves every panel.
std::vector<Panel> refine(std::span<const Panel> panels);

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre integral of f over [lo, hi].
template <class F>
double integrate(double lo, double hi, F&& f) {
    const auto& rule = gauss_legendre();
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t k = 0; k < kGaussOrder; ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return half * sum;
}

} // namespace pointwave::quadrature
