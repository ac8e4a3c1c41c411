#include "pointwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pointwave::quadrature {

namespace {

GaussRule make_rule() {
    GaussRule rule{};
    constexpr std::size_t n = kGaussOrder;
    for (std::size_t i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

double pairwise_range(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += v[i];
        }
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

} // namespace

const GaussRule& gauss_legendre() {
    static const GaussRule rule = make_rule();
    return rule;
}

std::vector<Panel> build_panels(double lo, double hi, std::span<const double> breakpoints,
                                double max_width, double merge_tol) {
    std::vector<double> cuts{lo, hi};
    for (double b : breakpoints) {
        if (b > lo + merge_tol && b < hi - merge_tol) {
            cuts.push_back(b);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> merged;
    for (double c : cuts) {
        if (merged.empty() || c - merged.back() > merge_tol) {
            merged.push_back(c);
        }
    }
    merged.back() = hi;

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double a = merged[i];
        const double b = merged[i + 1];
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
        const double w = (b - a) / static_cast<double>(pieces);
        for (std::size_t k = 0; k < pieces; ++k) {
            const double p_lo = a + w * static_cast<double>(k);
            const double p_hi = (k + 1 == pieces) ? b : a + w * static_cast<double>(k + 1);
            panels.push_back({p_lo, p_hi});
        }
    }
    return panels;
}

std::vector<Panel> refine(std::span<const Panel> panels) {
    std::vector<Panel> out;
    out.reserve(2 * panels.size());
    for (const auto& p : panels) {
        const double mid = 0.5 * (p.lo + p.hi);
        out.push_back({p.lo, mid});
        out.push_back({mid, p.hi});
    }
    return out;
}

double pairwise_sum(std::span<const double> values) {
    return pairwise_range(values.data(), values.size());
}

} // namespace pointwave::quadrature
