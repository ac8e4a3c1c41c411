#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version and a serial
// reference with the same arithmetic; the two must agree bit for bit, which
// the kernel tests check. Reductions go through a fixed panel partition and a
// pairwise sum so the thread count never changes a result.

#include <array>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "pointwave/quadrature.hpp"

namespace pointwave::kernels {

/// Number of threads the parallel kernels will use.
int max_threads();
/// Caps the thread count (no-op when built without OpenMP).
void set_threads(int n);

namespace detail {

class ExceptionSlot {
public:
    void capture() {
        std::lock_guard lock(mutex_);
        if (!error_) {
            error_ = std::current_exception();
        }
    }
    void rethrow_if_any() const {
        if (error_) {
            std::rethrow_exception(error_);
        }
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

template <std::size_t K>
std::array<double, K> reduce_panels(const std::vector<std::array<double, K>>& per_panel) {
    std::array<double, K> total{};
    std::vector<double> column(per_panel.size());
    for (std::size_t c = 0; c < K; ++c) {
        for (std::size_t p = 0; p < per_panel.size(); ++p) {
            column[p] = per_panel[p][c];
        }
        total[c] = quadrature::pairwise_sum(column);
    }
    return total;
}

template <std::size_t K, class F>
std::array<double, K> panel_integral(const quadrature::Panel& panel, F& integrand) {
    const auto& rule = quadrature::gauss_legendre();
    const double half = 0.5 * (panel.hi - panel.lo);
    const double mid = 0.5 * (panel.hi + panel.lo);
    std::array<double, K> acc{};
    for (std::size_t k = 0; k < quadrature::kGaussOrder; ++k) {
        const std::array<double, K> v = integrand(mid + half * rule.nodes[k]);
        for (std::size_t c = 0; c < K; ++c) {
            acc[c] += rule.weights[k] * v[c];
        }
    }
    for (auto& a : acc) {
        a *= half;
    }
    return acc;
}

} // namespace detail

/// Integrates a K-component integrand over the panel partition. `integrand(r)`
/// returns std::array<double, K> and must be safe to call concurrently.
template <std::size_t K, class F>
std::array<double, K> integrate_panels(std::span<const quadrature::Panel> panels, F&& integrand) {
    std::vector<std::array<double, K>> per_panel(panels.size());
    detail::ExceptionSlot slot;
    const auto n = static_cast<std::ptrdiff_t>(panels.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
        try {
            per_panel[static_cast<std::size_t>(p)] =
                detail::panel_integral<K>(panels[static_cast<std::size_t>(p)], integrand);
        } catch (...) {
            slot.capture();
        }
    }
    slot.rethrow_if_any();
    return detail::reduce_panels<K>(per_panel);
}

template <std::size_t K, class F>
std::array<double, K> integrate_panels_serial(std::span<const quadrature::Panel> panels,
                                              F&& integrand) {
    std::vector<std::array<double, K>> per_panel(panels.size());
    for (std::size_t p = 0; p < panels.size(); ++p) {
        per_panel[p] = detail::panel_integral<K>(panels[p], integrand);
    }
    return detail::reduce_panels<K>(per_panel);
}

/// out[i] = f(points[i]).
template <class T, class F>
void evaluate_points(std::span<const double> points, std::span<T> out, F&& f) {
    detail::ExceptionSlot slot;
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(points[static_cast<std::size_t>(i)]);
        } catch (...) {
            slot.capture();
        }
    }
    slot.rethrow_if_any();
}

template <class T, class F>
void evaluate_points_serial(std::span<const double> points, std::span<T> out, F&& f) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[i] = f(points[i]);
    }
}

/// Unit-Courant leapfrog for u_tt = u_rr on interior nodes 1..N-1:
/// next[j] = curr[j+1] + curr[j-1] - prev[j]. Boundary entries of `next` are untouched.
void leapfrog_interior(std::span<const double> prev, std::span<const double> curr,
                       std::span<double> next);
void leapfrog_interior_serial(std::span<const double> prev, std::span<const double> curr,
                              std::span<double> next);

} // namespace pointwave::kernels
