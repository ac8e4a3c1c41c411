#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

#include "pointwave/errors.hpp"
#include "pointwave/initial_data.hpp"

using namespace pointwave;
namespace cutoff = pointwave::cutoff;

namespace {

constexpr double kPi = std::numbers::pi;

// plain composite Simpson, deliberately unrelated to the library's Gauss panels
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double richardson_simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double coarse = simpson(f, a, b, n);
    const double fine = simpson(f, a, b, 2 * n);
    return fine + (fine - coarse) / 15.0;
}

// w = (1 - chi) G and its radial derivatives by central differences of chi only
double w_prime_fd(double r) {
    const double h = 1e-5;
    auto w = [](double x) { return (1.0 - cutoff::chi(x)) / (4 * kPi * x); };
    return (w(r + h) - w(r - h)) / (2 * h);
}

double lap_w_fd(double r) {
    const double h = 1e-3;
    auto rw = [](double x) { return (1.0 - cutoff::chi(x)) / (4 * kPi); };
    const double d2 = (-rw(r - 2 * h) + 16 * rw(r - h) - 30 * rw(r) + 16 * rw(r + h) - rw(r + 2 * h)) /
                      (12 * h * h);
    return d2 / r;
}

// |grad w|^2 and |Lap w|^2 over R^3 (w = -G beyond r = 2 gives the 1/(8 pi) tail)
double grad_w_sq() {
    return richardson_simpson([](double r) { return 4 * kPi * r * r * std::pow(w_prime_fd(r), 2); },
                              1.0, 2.0, 400) +
           1.0 / (8 * kPi);
}

double lap_w_sq() {
    return richardson_simpson([](double r) { return 4 * kPi * r * r * std::pow(lap_w_fd(r), 2); },
                              1.0, 2.0, 400);
}

} // namespace

TEST_CASE("Green's function") {
    CHECK(green(1.0) == doctest::Approx(0.0795775).epsilon(1e-6));
    CHECK(green(0.5) == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-15));
    CHECK(green(2.0) == doctest::Approx(1.0 / (8 * kPi)).epsilon(1e-15));
    CHECK_THROWS_AS(green(0.0), DomainError);
    CHECK_THROWS_AS(green(-1.0), DomainError);
}

TEST_CASE("cutoff values and symmetry") {
    CHECK(cutoff::chi(0.5) == 1.0);
    CHECK(cutoff::chi(1.0) == 1.0);
    CHECK(cutoff::chi(2.5) == 0.0);
    CHECK(cutoff::chi(2.0) == 0.0);
    CHECK(cutoff::chi(1.5) == doctest::Approx(0.5).epsilon(1e-15));
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double r = 1.0 + i / 1000.0;
        const double c = cutoff::chi(r);
        CHECK(c <= prev);
        CHECK(c + cutoff::chi(3.0 - r) == doctest::Approx(1.0).epsilon(1e-14));
        prev = c;
    }
}

TEST_CASE("cutoff derivatives match finite differences") {
    for (int i = 1; i < 100; ++i) {
        const double r = 1.0 + i / 100.0;
        const double h = 1e-5;
        const double d1 = (cutoff::chi(r + h) - cutoff::chi(r - h)) / (2 * h);
        const double d2 = (cutoff::chi_prime(r + h) - cutoff::chi_prime(r - h)) / (2 * h);
        CHECK(cutoff::chi_prime(r) == doctest::Approx(d1).epsilon(1e-7).scale(1.0));
        CHECK(cutoff::chi_second(r) == doctest::Approx(d2).epsilon(1e-6).scale(1.0));
    }
    CHECK(cutoff::chi_prime(0.5) == 0.0);
    CHECK(cutoff::chi_second(2.5) == 0.0);
}

TEST_CASE("cutoff integral") {
    for (double s : {0.0, 0.3, 1.0, 1.1, 1.25, 1.5, 1.7, 1.99, 2.0, 5.0}) {
        const double ref = s <= 1.0 ? s : 1.0 + richardson_simpson(cutoff::chi, 1.0, s, 2000);
        CHECK(cutoff::chi_integral(s) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(cutoff::chi_integral(7.0) == 1.5);
}

TEST_CASE("bump profile derivatives and moment") {
    const auto b = RadialProfile::bump(-0.375, 1.3);
    CHECK(b.value(0.0) == -0.375);
    CHECK(b.d1(0.0) == 0.0);
    CHECK(b.value(1.3) == 0.0);
    CHECK(b.value(2.0) == 0.0);
    CHECK(b.support_radius() == 1.3);
    for (int i = 1; i < 50; ++i) {
        const double r = 1.3 * i / 50.0;
        const double h = 1e-5;
        CHECK(b.d1(r) == doctest::Approx((b.value(r + h) - b.value(r - h)) / (2 * h)).epsilon(1e-8));
        CHECK(b.d2(r) == doctest::Approx((b.d1(r + h) - b.d1(r - h)) / (2 * h)).epsilon(1e-7));
        const double m = richardson_simpson([&](double x) { return x * b.value(x); }, 0.0, r, 200);
        CHECK(b.moment(r) == doctest::Approx(m).epsilon(1e-12).scale(1e-12));
    }
    CHECK(b.moment(5.0) == doctest::Approx(b.moment(1.3)).epsilon(1e-15));
    CHECK_THROWS_AS(RadialProfile::bump(1.0, 0.0), DomainError);
}

TEST_CASE("spline profile") {
    const std::vector<double> r{0.0, 0.4, 1.0, 1.6};
    const std::vector<double> v{0.25, 0.2, -0.1, 0.0};
    const auto s = RadialProfile::spline(r, v);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(s.value(r[i]) == doctest::Approx(v[i]).epsilon(1e-14));
    CHECK(s.d1(0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(s.d1(1.6) == doctest::Approx(0.0).scale(1.0));
    CHECK(s.value(2.0) == 0.0);
    CHECK(s.support_radius() == 1.6);
    // C2 across interior knots
    for (double k : {0.4, 1.0}) {
        CHECK(s.d1(k - 1e-9) == doctest::Approx(s.d1(k + 1e-9)).epsilon(1e-6));
        CHECK(s.d2(k - 1e-9) == doctest::Approx(s.d2(k + 1e-9)).epsilon(1e-6));
    }
    for (double x : {0.1, 0.4, 0.77, 1.3, 1.6, 3.0}) {
        // r * spline is a quartic per segment, which Richardson-Simpson integrates exactly
        double m = 0.0;
        for (std::size_t k = 0; k + 1 < r.size() && r[k] < x; ++k) {
            m += richardson_simpson([&](double y) { return y * s.value(y); }, r[k],
                                    std::min(x, r[k + 1]), 8);
        }
        CHECK(s.moment(x) == doctest::Approx(m).epsilon(1e-12).scale(1e-12));
    }
    CHECK_THROWS_AS(RadialProfile::spline({0.1, 1.0}, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(RadialProfile::spline({0.0, 1.0}, {1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(RadialProfile::spline({0.0, 1.0, 0.5}, {1.0, 0.5, 0.0}), DomainError);

    const auto path = std::filesystem::temp_directory_path() / "pointwave_spline_test.txt";
    {
        std::ofstream f(path);
        f << "# r value\n0 0.25\n0.4 0.2   # knot\n1.0 -0.1\n\n1.6 0\n";
    }
    const auto loaded = RadialProfile::load_spline(path);
    for (double x : {0.0, 0.3, 0.9, 1.5}) CHECK(loaded.value(x) == doctest::Approx(s.value(x)).epsilon(1e-15));
    {
        std::ofstream f(path);
        f << "0 1\n0.5 foo\n";
    }
    CHECK_THROWS(RadialProfile::load_spline(path));
    std::filesystem::remove(path);
    CHECK_THROWS(RadialProfile::load_spline(path));
}

TEST_CASE("tail and scaling") {
    const auto p = RadialProfile::bump(2.0, 1.0).with_tail(3.0);
    CHECK(p.tail() == 3.0);
    CHECK(p.total(0.5) == doctest::Approx(p.value(0.5)));
    CHECK(p.total(4.0) == doctest::Approx(3.0 * green(4.0)).epsilon(1e-15));
    const auto q = p.scaled(-2.0);
    CHECK(q.value(0.3) == doctest::Approx(-2.0 * p.value(0.3)));
    CHECK(q.tail() == -6.0);
    CHECK(q.moment(0.8) == doctest::Approx(-2.0 * p.moment(0.8)));
}

TEST_CASE("compatibility condition") {
    const auto cubic = Nonlinearity::cubic();
    const auto ok = make_initial_state(RadialProfile::bump(cubic.force(0.5), 1.0),
                                       RadialProfile::zero(), 0.5, 0.0, cubic);
    CHECK(ok.phi().value(0.0) == cubic.force(0.5));
    CHECK(ok.support_radius() == 2.0);
    CHECK_NOTHROW(make_initial_state(RadialProfile::zero(), RadialProfile::zero(), 1.0, 0.0, cubic));
    CHECK_THROWS_AS(make_initial_state(RadialProfile::zero(), RadialProfile::zero(), 0.5, 0.0, cubic),
                    CompatibilityError);

    const auto wide = make_initial_state(RadialProfile::bump(cubic.force(0.5), 3.0),
                                         RadialProfile::bump(1.0, 2.5), 0.5, 0.3, cubic);
    CHECK(wide.support_radius() == 3.0);
    for (double r : {3.01, 4.0, 10.0}) {
        CHECK(wide.psi0(r) == 0.0);
        CHECK(wide.pi0(r) == 0.0);
    }
    const auto kinks = wide.kink_radii();
    CHECK(kinks == std::vector<double>{1.0, 2.0, 2.5, 3.0});

    const auto rev = wide.time_reversed();
    CHECK(rev.zeta_dot0() == -0.3);
    CHECK(rev.pi0(0.7) == doctest::Approx(-wide.pi0(0.7)));
    CHECK(rev.psi0(0.7) == wide.psi0(0.7));
}

TEST_CASE("stationary data is exactly qG") {
    const auto cubic = Nonlinearity::cubic();
    const auto s = stationary_data(1.0, cubic);
    for (double r : {0.01, 0.5, 1.0, 1.3, 1.9, 2.0, 7.0}) {
        CHECK(s.psi0(r) == doctest::Approx(1.0 / (4 * kPi * r)).epsilon(1e-15));
        CHECK(s.pi0(r) == 0.0);
        CHECK(std::abs(s.psi0_regular(r)) <= 1e-15 / r);
    }
    const auto z = stationary_data(0.0, cubic);
    CHECK(z.psi0(0.7) == 0.0);
    CHECK(z.tail_free());
    CHECK_THROWS_AS(stationary_data(0.5, cubic), CompatibilityError);
}

TEST_CASE("phase-space norm") {
    const auto cubic = Nonlinearity::cubic();
    const auto zero = make_initial_state(RadialProfile::zero(), RadialProfile::zero(), 0.0, 0.0, cubic);
    CHECK(phase_norm(zero) == 0.0);

    const double g2 = grad_w_sq();
    const double l2 = lap_w_sq();
    const auto unit = make_initial_state(RadialProfile::zero(), RadialProfile::zero(), 1.0, 0.0, cubic);
    CHECK(phase_norm(unit) == doctest::Approx(1.0 + g2 + l2).epsilon(1e-8));

    const auto vel = make_initial_state(RadialProfile::zero(), RadialProfile::zero(), 0.0, 3.0, cubic);
    CHECK(phase_norm(vel) == doctest::Approx(9.0 + 9.0 * g2).epsilon(1e-8));

    CHECK_THROWS_AS(phase_norm(stationary_data(1.0, cubic)), DomainError);
}

TEST_CASE("phase-space norm is quadratic in the regular part") {
    const auto cubic = Nonlinearity::cubic();
    const auto phi = RadialProfile::spline({0.0, 0.5, 1.2}, {0.0, 0.3, 0.0});
    const auto pi = RadialProfile::bump(0.7, 1.8);
    const double base = phase_norm(make_initial_state(phi, pi, 0.0, 0.0, cubic));
    CHECK(base > 0.0);
    for (double c : {-2.0, 0.5, 3.0}) {
        const double scaled =
            phase_norm(make_initial_state(phi.scaled(c), pi.scaled(c), 0.0, 0.0, cubic));
        CHECK(scaled == doctest::Approx(c * c * base).epsilon(1e-13));
    }
}
