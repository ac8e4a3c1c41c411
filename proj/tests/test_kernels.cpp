#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pointwave/kernels.hpp"
#include "pointwave/quadrature.hpp"

using namespace pointwave;

namespace {

struct ThreadScope {
    explicit ThreadScope(int n) : saved(kernels::max_threads()) { kernels::set_threads(n); }
    ~ThreadScope() { kernels::set_threads(saved); }
    int saved;
};

} // namespace

TEST_CASE("pairwise sum") {
    CHECK(quadrature::pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(quadrature::pairwise_sum(std::vector<double>{2.5}) == 2.5);
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(quadrature::pairwise_sum(v) == 500500.0);
    // 1 + many tiny terms: naive summation would lose them
    std::vector<double> w(1 << 20, 1e-16);
    w[0] = 1.0;
    CHECK(std::abs(quadrature::pairwise_sum(w) - (1.0 + 1e-16 * ((1 << 20) - 1))) < 1e-15);
}

TEST_CASE("Gauss-Legendre rule") {
    const auto& rule = quadrature::gauss_legendre();
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
    // exact for degree 19
    for (int d = 0; d <= 19; ++d) {
        const double exact = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
        const double got = quadrature::integrate(-1.0, 1.0, [d](double x) { return std::pow(x, d); });
        CHECK(std::abs(got - exact) <= 1e-15);
    }
    const double got = quadrature::integrate(0.0, 1.0, [](double x) { return std::pow(x, 20); });
    CHECK(std::abs(got - 1.0 / 21.0) > 1e-16);
}

TEST_CASE("panel construction") {
    const double breaks[] = {0.3, 0.3 + 1e-12, 2.0, -1.0};
    const auto panels = quadrature::build_panels(0.0, 1.0, breaks, 0.25);
    REQUIRE(!panels.empty());
    CHECK(panels.front().lo == 0.0);
    CHECK(panels.back().hi == 1.0);
    bool has_break = false;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        CHECK(panels[i].hi - panels[i].lo <= 0.25 + 1e-15);
        if (i > 0) CHECK(panels[i].lo == panels[i - 1].hi);
        if (panels[i].hi == 0.3) has_break = true;
    }
    CHECK(has_break);
    CHECK(quadrature::refine(panels).size() == 2 * panels.size());
}

TEST_CASE("parallel kernels match the serial references bit for bit") {
    ThreadScope threads(4);
    const auto panels = quadrature::build_panels(0.0, 30.0, std::vector<double>{1.0, 7.5}, 1.0 / 16.0);
    auto f = [](double r) -> std::array<double, 3> {
        return {std::sin(r) * std::exp(-0.1 * r), r * r, 1.0 / (1.0 + r)};
    };
    const auto par = kernels::integrate_panels<3>(panels, f);
    const auto ser = kernels::integrate_panels_serial<3>(panels, f);
    for (std::size_t c = 0; c < 3; ++c) CHECK(par[c] == ser[c]);
    CHECK(par[1] == doctest::Approx(9000.0).epsilon(1e-13));

    std::vector<double> pts(4097);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = 1e-3 * static_cast<double>(i);
    std::vector<double> a(pts.size()), b(pts.size());
    auto g = [](double x) { return std::cos(3 * x) / (1 + x * x); };
    kernels::evaluate_points<double>(pts, a, g);
    kernels::evaluate_points_serial<double>(pts, b, g);
    CHECK(a == b);

    std::vector<double> prev(5001), curr(5001);
    for (std::size_t j = 0; j < prev.size(); ++j) {
        prev[j] = std::sin(0.01 * j);
        curr[j] = std::sin(0.01 * j + 0.003);
    }
    std::vector<double> n1(prev.size(), -7.0), n2(prev.size(), -7.0);
    kernels::leapfrog_interior(prev, curr, n1);
    kernels::leapfrog_interior_serial(prev, curr, n2);
    CHECK(n1 == n2);
    CHECK(n1.front() == -7.0);
    CHECK(n1.back() == -7.0);
    CHECK(n1[10] == curr[11] + curr[9] - prev[10]);
}

TEST_CASE("thread count does not change reductions") {
    const auto panels = quadrature::build_panels(0.0, 10.0, std::vector<double>{}, 0.01);
    auto f = [](double r) -> std::array<double, 1> { return {std::exp(-r) * std::sin(5 * r)}; };
    std::array<double, 1> ref{};
    {
        ThreadScope t(1);
        ref = kernels::integrate_panels<1>(panels, f);
    }
    for (int n : {2, 3, 7}) {
        ThreadScope t(n);
        CHECK(kernels::integrate_panels<1>(panels, f)[0] == ref[0]);
    }
}

TEST_CASE("exceptions inside parallel loops reach the caller") {
    ThreadScope threads(3);
    std::vector<double> pts(100, 1.0), out(100);
    pts[57] = -1.0;
    auto g = [](double x) {
        if (x < 0) throw std::domain_error("negative");
        return std::sqrt(x);
    };
    CHECK_THROWS_AS(kernels::evaluate_points<double>(pts, out, g), std::domain_error);
}
