#include "pointwave/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "pointwave/errors.hpp"
#include "pointwave/kernels.hpp"
#include "pointwave/quadrature.hpp"

namespace pointwave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// f(s) = exp(-1/s) and its first two derivatives; all vanish for s below the
// underflow threshold of exp.
constexpr double kFlatThreshold = 1.0 / 700.0;

double flat(double s) { return s > kFlatThreshold ? std::exp(-1.0 / s) : 0.0; }

double flat_d1(double s) { return s > kFlatThreshold ? std::exp(-1.0 / s) / (s * s) : 0.0; }

double flat_d2(double s) {
    if (s <= kFlatThreshold) return 0.0;
    const double inv = 1.0 / s;
    return std::exp(-inv) * (inv * inv * inv * inv - 2.0 * inv * inv * inv);
}

// Cumulative integral of chi on [1, 1.5]; the other half follows from chi(3 - r) = 1 - chi(r).
class ChiIntegralTable {
public:
    static constexpr std::size_t kPanels = 128;
    static constexpr double kLo = 1.0;
    static constexpr double kHi = 1.5;

    ChiIntegralTable() {
        cumulative_[0] = 0.0;
        for (std::size_t i = 0; i < kPanels; ++i) {
            cumulative_[i + 1] =
                cumulative_[i] + quadrature::integrate(node(i), node(i + 1), cutoff::chi);
        }
    }

    // Integral of chi over [1, x], x in [1, 1.5].
    double operator()(double x) const {
        const double pos = (x - kLo) / width();
        auto i = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(kPanels)));
        if (i >= kPanels) return cumulative_[kPanels];
        return cumulative_[i] + quadrature::integrate(node(i), x, cutoff::chi);
    }

private:
    static double width() { return (kHi - kLo) / static_cast<double>(kPanels); }
    static double node(std::size_t i) { return kLo + width() * static_cast<double>(i); }

    std::array<double, kPanels + 1> cumulative_{};
};

} // namespace

double green(double r) {
    if (!(r > 0.0)) {
        throw DomainError("Green's function requires r > 0");
    }
    return 1.0 / (kFourPi * r);
}

namespace cutoff {

double chi(double r) {
    if (r <= kInnerRadius) return 1.0;
    if (r >= kOuterRadius) return 0.0;
    const double a = flat(kOuterRadius - r);
    const double b = flat(r - kInnerRadius);
    return a / (a + b);
}

double chi_prime(double r) {
    if (r <= kInnerRadius || r >= kOuterRadius) return 0.0;
    const double a = flat(kOuterRadius - r);
    const double b = flat(r - kInnerRadius);
    const double da = -flat_d1(kOuterRadius - r);
    const double db = flat_d1(r - kInnerRadius);
    const double s = a + b;
    return (da * b - a * db) / (s * s);
}

double chi_second(double r) {
    if (r <= kInnerRadius || r >= kOuterRadius) return 0.0;
    const double a = flat(kOuterRadius - r);
    const double b = flat(r - kInnerRadius);
    const double da = -flat_d1(kOuterRadius - r);
    const double db = flat_d1(r - kInnerRadius);
    const double dda = flat_d2(kOuterRadius - r);
    const double ddb = flat_d2(r - kInnerRadius);
    const double s = a + b;
    const double ds = da + db;
    const double num = da * b - a * db;
    const double dnum = dda * b - a * ddb;
    return dnum / (s * s) - 2.0 * num * ds / (s * s * s);
}

double chi_integral(double s) {
    static const ChiIntegralTable table;
    if (s <= kInnerRadius) return std::max(s, 0.0);
    if (s >= kOuterRadius) return 1.5;
    if (s <= 1.5) return 1.0 + table(s);
    return s - 0.5 + table(3.0 - s);
}

} // namespace cutoff

RadialProfile RadialProfile::zero() { return RadialProfile{}; }

RadialProfile RadialProfile::bump(double amplitude, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(amplitude)) {
        throw DomainError("bump profile needs a finite amplitude and a positive radius");
    }
    RadialProfile p;
    p.kind_ = Kind::Bump;
    p.amplitude_ = amplitude;
    p.support_ = radius;
    return p;
}

RadialProfile RadialProfile::spline(std::vector<double> r, std::vector<double> v) {
    const std::size_t n = r.size();
    if (n < 2 || v.size() != n) {
        throw DomainError("spline profile needs at least two (r, value) pairs");
    }
    if (r.front() != 0.0) {
        throw DomainError("spline profile must start at r = 0");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(r[i] > r[i - 1])) {
            throw DomainError("spline radii must be strictly increasing");
        }
    }
    if (v.back() != 0.0) {
        throw DomainError("spline profile must vanish at its last radius");
    }

    // Second derivatives of the clamped spline (zero end slopes): tridiagonal solve.
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = r[i + 1] - r[i];
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    rhs[0] = 6.0 * ((v[1] - v[0]) / h[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * ((v[i + 1] - v[i]) / h[i] - (v[i] - v[i - 1]) / h[i - 1]);
    }
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];
    rhs[n - 1] = 6.0 * (0.0 - (v[n - 1] - v[n - 2]) / h[n - 2]);
    for (std::size_t i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> M(n);
    M[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        M[i] = (rhs[i] - sup[i] * M[i + 1]) / diag[i];
    }

    RadialProfile p;
    p.kind_ = Kind::Spline;
    p.support_ = r.back();
    p.moment_table_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Segment s{};
        s.x0 = r[i];
        s.c[0] = v[i];
        s.c[1] = (v[i + 1] - v[i]) / h[i] - h[i] * (2.0 * M[i] + M[i + 1]) / 6.0;
        s.c[2] = 0.5 * M[i];
        s.c[3] = (M[i + 1] - M[i]) / (6.0 * h[i]);
        p.segments_.push_back(s);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto& s = p.segments_[i];
        const double W = h[i];
        const double W2 = W * W, W3 = W2 * W, W4 = W3 * W, W5 = W4 * W;
        const double plain = s.c[0] * W + s.c[1] * W2 / 2 + s.c[2] * W3 / 3 + s.c[3] * W4 / 4;
        const double weighted = s.c[0] * W2 / 2 + s.c[1] * W3 / 3 + s.c[2] * W4 / 4 + s.c[3] * W5 / 5;
        p.moment_table_[i + 1] = p.moment_table_[i] + s.x0 * plain + weighted;
    }
    return p;
}

RadialProfile RadialProfile::load_spline(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigurationError("cannot open profile file '" + path.string() + "'");
    }
    std::vector<double> r, v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double a = 0.0, b = 0.0;
        if (!(ls >> a >> b)) {
            throw ConfigurationError(path.string() + ":" + std::to_string(line_no) +
                                     ": expected two numbers");
        }
        r.push_back(a);
        v.push_back(b);
    }
    return spline(std::move(r), std::move(v));
}

RadialProfile RadialProfile::with_tail(double alpha) const {
    RadialProfile p = *this;
    p.tail_ = alpha;
    return p;
}

RadialProfile RadialProfile::scaled(double c) const {
    RadialProfile p = *this;
    p.scale_ *= c;
    p.tail_ *= c;
    return p;
}

const RadialProfile::Segment* RadialProfile::segment_for(double r) const {
    if (r >= support_) return nullptr;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), r,
                               [](double x, const Segment& s) { return x < s.x0; });
    return &*std::prev(it);
}

double RadialProfile::value(double r) const {
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Bump: {
        if (r >= support_) return 0.0;
        const double p = 1.0 - r * r / (support_ * support_);
        return scale_ * amplitude_ * p * p * p;
    }
    case Kind::Spline: {
        const Segment* s = segment_for(r);
        if (!s) return 0.0;
        const double w = r - s->x0;
        return scale_ * (s->c[0] + w * (s->c[1] + w * (s->c[2] + w * s->c[3])));
    }
    }
    return 0.0;
}

double RadialProfile::d1(double r) const {
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Bump: {
        if (r >= support_) return 0.0;
        const double rho2 = support_ * support_;
        const double p = 1.0 - r * r / rho2;
        return scale_ * amplitude_ * 3.0 * p * p * (-2.0 * r / rho2);
    }
    case Kind::Spline: {
        const Segment* s = segment_for(r);
        if (!s) return 0.0;
        const double w = r - s->x0;
        return scale_ * (s->c[1] + w * (2.0 * s->c[2] + 3.0 * w * s->c[3]));
    }
    }
    return 0.0;
}

double RadialProfile::d2(double r) const {
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Bump: {
        if (r >= support_) return 0.0;
        const double rho2 = support_ * support_;
        const double p = 1.0 - r * r / rho2;
        const double dp = -2.0 * r / rho2;
        return scale_ * amplitude_ * 3.0 * (2.0 * p * dp * dp + p * p * (-2.0 / rho2));
    }
    case Kind::Spline: {
        const Segment* s = segment_for(r);
        if (!s) return 0.0;
        const double w = r - s->x0;
        return scale_ * (2.0 * s->c[2] + 6.0 * w * s->c[3]);
    }
    }
    return 0.0;
}

double RadialProfile::moment(double s) const {
    s = std::max(s, 0.0);
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Bump: {
        const double rho2 = support_ * support_;
        const double p = s >= support_ ? 0.0 : 1.0 - s * s / rho2;
        return scale_ * amplitude_ * rho2 / 8.0 * (1.0 - p * p * p * p);
    }
    case Kind::Spline: {
        if (s >= support_) return scale_ * moment_table_.back();
        const Segment* seg = segment_for(s);
        const auto i = static_cast<std::size_t>(seg - segments_.data());
        const double W = s - seg->x0;
        const double W2 = W * W, W3 = W2 * W, W4 = W3 * W, W5 = W4 * W;
        const double plain =
            seg->c[0] * W + seg->c[1] * W2 / 2 + seg->c[2] * W3 / 3 + seg->c[3] * W4 / 4;
        const double weighted =
            seg->c[0] * W2 / 2 + seg->c[1] * W3 / 3 + seg->c[2] * W4 / 4 + seg->c[3] * W5 / 5;
        return scale_ * (moment_table_[i] + seg->x0 * plain + weighted);
    }
    }
    return 0.0;
}

double RadialProfile::total(double r) const {
    const double tail = tail_ == 0.0 ? 0.0 : tail_ * (1.0 - cutoff::chi(r)) * green(r);
    return value(r) + tail;
}

InitialState::InitialState(RadialProfile phi, RadialProfile pi, double zeta0, double zeta_dot0,
                           Nonlinearity nl)
    : phi_(std::move(phi)),
      pi_(std::move(pi)),
      zeta0_(zeta0),
      zeta_dot0_(zeta_dot0),
      nl_(std::move(nl)),
      support_radius_(std::max({cutoff::kOuterRadius, phi_.support_radius(), pi_.support_radius()})) {}

std::vector<double> InitialState::kink_radii() const {
    std::vector<double> k{cutoff::kInnerRadius, cutoff::kOuterRadius};
    if (phi_.support_radius() > 0.0) k.push_back(phi_.support_radius());
    if (pi_.support_radius() > 0.0) k.push_back(pi_.support_radius());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

double InitialState::psi0(double r) const {
    return zeta0_ * cutoff::chi(r) * green(r) + phi_.total(r);
}

double InitialState::pi0(double r) const {
    return zeta_dot0_ * cutoff::chi(r) * green(r) + pi_.total(r);
}

double InitialState::psi0_regular(double r) const {
    return phi_.value(r) + (phi_.tail() - zeta0_) * (1.0 - cutoff::chi(r)) * green(r);
}

InitialState InitialState::time_reversed() const {
    return InitialState(phi_, pi_.scaled(-1.0), zeta0_, -zeta_dot0_, nl_);
}

InitialState make_initial_state(RadialProfile phi, RadialProfile pi, double zeta0,
                                double zeta_dot0, Nonlinearity nl, double tol) {
    if (!std::isfinite(zeta0) || !std::isfinite(zeta_dot0)) {
        throw DomainError("initial amplitudes must be finite");
    }
    const double f0 = nl.eval(zeta0).force;
    // The tail term (1 - chi) G vanishes near the origin, so only the bump enters.
    const double at_origin = phi.value(0.0);
    if (std::abs(at_origin - f0) > tol * std::max(1.0, std::abs(f0))) {
        std::ostringstream os;
        os << "initial data violates the point-interaction condition: regular part at the "
              "origin is "
           << at_origin << " but F(zeta0) = " << f0;
        throw CompatibilityError(os.str());
    }
    return InitialState(std::move(phi), std::move(pi), zeta0, zeta_dot0, std::move(nl));
}

InitialState stationary_data(double q, const Nonlinearity& nl, double tol) {
    const double f = nl.eval(q).force;
    if (std::abs(f) > tol) {
        std::ostringstream os;
        os << "q = " << q << " is not a stationary amplitude: F(q) = " << f
           << " (stationary states qG exist only where F(q) = 0)";
        throw CompatibilityError(os.str());
    }
    return make_initial_state(RadialProfile::zero().with_tail(q), RadialProfile::zero(), q, 0.0,
                              nl, tol);
}

double phase_norm(const InitialState& state) {
    if (!state.tail_free()) {
        throw DomainError("phase-space norm is infinite for data with a Coulomb tail");
    }
    const double z0 = state.zeta0();
    const double z1 = state.zeta_dot0();
    const auto& phi = state.phi();
    const auto& pi = state.pi();
    const double R = state.support_radius();

    // w = (1 - chi) G:  w' = -chi'/(4 pi r) - (1 - chi)/(4 pi r^2),  Lap w = -chi''/(4 pi r).
    auto integrand = [&](double r) -> std::array<double, 3> {
        const double c = cutoff::chi(r);
        const double dw = -cutoff::chi_prime(r) / (kFourPi * r) - (1.0 - c) / (kFourPi * r * r);
        const double lap_w = -cutoff::chi_second(r) / (kFourPi * r);
        const double grad_psi = phi.d1(r) - z0 * dw;
        const double lap_psi = phi.d2(r) + 2.0 * phi.d1(r) / r - z0 * lap_w;
        const double grad_pi = pi.d1(r) - z1 * dw;
        const double w = kFourPi * r * r;
        return {w * grad_psi * grad_psi, w * lap_psi * lap_psi, w * grad_pi * grad_pi};
    };
    const auto kinks = state.kink_radii();
    const auto panels = quadrature::build_panels(0.0, R, kinks, 1.0 / 64.0);
    const auto parts = kernels::integrate_panels<3>(panels, integrand);

    // Beyond the support psi_reg = -zeta0 G and pi_reg = -zeta_dot0 G.
    const double tail_grad_psi = z0 * z0 / (kFourPi * R);
    const double tail_grad_pi = z1 * z1 / (kFourPi * R);
    return parts[0] + tail_grad_psi + parts[1] + parts[2] + tail_grad_pi + z0 * z0 + z1 * z1;
}

} // namespace pointwave
