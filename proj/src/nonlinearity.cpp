#include "pointwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "pointwave/errors.hpp"

namespace pointwave {

namespace {

double horner(const std::vector<double>& c, double z) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

std::string describe_polynomial(const std::vector<double>& c) {
    std::ostringstream os;
    os << "polynomial F[";
    for (std::size_t k = 0; k < c.size(); ++k) {
        os << (k ? "," : "") << c[k];
    }
    os << "]";
    return os.str();
}

} // namespace

Nonlinearity::Nonlinearity(std::string descriptor, Fn potential, Fn force, Fn force_derivative)
    : descriptor_(std::move(descriptor)),
      potential_(std::move(potential)),
      force_(std::move(force)),
      force_derivative_(std::move(force_derivative)) {}

Nonlinearity Nonlinearity::polynomial(std::vector<double> force_coefficients,
                                      std::string descriptor) {
    if (force_coefficients.empty()) {
        force_coefficients.push_back(0.0);
    }
    std::vector<double> u(force_coefficients.size() + 1, 0.0);
    for (std::size_t k = 0; k < force_coefficients.size(); ++k) {
        u[k + 1] = force_coefficients[k] / static_cast<double>(k + 1);
    }
    std::vector<double> dF(force_coefficients.size() > 1 ? force_coefficients.size() - 1 : 1, 0.0);
    for (std::size_t k = 1; k < force_coefficients.size(); ++k) {
        dF[k - 1] = force_coefficients[k] * static_cast<double>(k);
    }
    if (descriptor.empty()) {
        descriptor = describe_polynomial(force_coefficients);
    }
    auto f = std::make_shared<const std::vector<double>>(std::move(force_coefficients));
    auto pu = std::make_shared<const std::vector<double>>(std::move(u));
    auto pd = std::make_shared<const std::vector<double>>(std::move(dF));
    return Nonlinearity(
        std::move(descriptor), [pu](double z) { return horner(*pu, z); },
        [f](double z) { return horner(*f, z); }, [pd](double z) { return horner(*pd, z); });
}

Nonlinearity Nonlinearity::cubic() { return polynomial({0.0, -1.0, 0.0, 1.0}, "cubic"); }
Nonlinearity Nonlinearity::linear() { return polynomial({0.0, 1.0}, "linear"); }
Nonlinearity Nonlinearity::quintic() {
    return polynomial({0.0, -1.0, 0.0, 0.0, 0.0, 1.0}, "quintic");
}

Nonlinearity Nonlinearity::from_name(std::string_view name) {
    if (name == "cubic") return cubic();
    if (name == "linear") return linear();
    if (name == "quintic") return quintic();
    throw ConfigurationError("unknown nonlinearity '" + std::string(name) +
                             "' (expected cubic, linear or quintic)");
}

PotentialForce Nonlinearity::eval(double z) const {
    if (!std::isfinite(z)) {
        throw DomainError("nonlinearity evaluated at a non-finite amplitude");
    }
    const PotentialForce out{potential(z), force(z)};
    if (!std::isfinite(out.potential) || !std::isfinite(out.force)) {
        std::ostringstream os;
        os << "nonlinearity '" << descriptor_ << "' is not finite at z = " << z;
        throw DomainError(os.str());
    }
    return out;
}

const Root& RootSet::nearest(double z) const {
    if (roots.empty()) {
        throw NumericalError("root set is empty");
    }
    return *std::min_element(roots.begin(), roots.end(), [z](const Root& a, const Root& b) {
        return std::abs(a.value - z) < std::abs(b.value - z);
    });
}

RootSet find_roots(const Nonlinearity& nl, double lo, double hi, double tol, std::size_t cells) {
    if (!(lo < hi)) {
        throw DomainError("find_roots requires lo < hi");
    }
    if (!(tol > 0.0) || cells == 0) {
        throw DomainError("find_roots requires tol > 0 and at least one cell");
    }
    RootSet out;
    out.bracket_tol = tol;
    std::vector<double> found;

    const double h = (hi - lo) / static_cast<double>(cells);
    auto node = [&](std::size_t i) {
        return i == cells ? hi : lo + h * static_cast<double>(i);
    };

    std::size_t flat_run = 0;
    bool flat_warned = false;
    double fa = nl.force(lo);
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = node(i);
        const double b = node(i + 1);
        const double fb = nl.force(b);
        flat_run = std::abs(fa) < tol ? flat_run + 1 : 0;
        if (flat_run >= 3 && !flat_warned) {
            std::ostringstream os;
            os << "|F| < " << tol << " on an interval near z = " << a
               << "; zeros of F may not be isolated";
            out.warnings.push_back(os.str());
            flat_warned = true;
        }
        if (fa == 0.0) {
            found.push_back(a);
        } else if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
            double x0 = a, x1 = b, f0 = fa;
            while (x1 - x0 > tol) {
                const double mid = 0.5 * (x0 + x1);
                if (mid <= x0 || mid >= x1) {
                    break;
                }
                const double fm = nl.force(mid);
                if (fm == 0.0) {
                    x0 = x1 = mid;
                    break;
                }
                if ((fm < 0.0) == (f0 < 0.0)) {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            found.push_back(0.5 * (x0 + x1));
        }
        fa = fb;
    }
    if (fa == 0.0) {
        found.push_back(hi);
    }

    for (double q : found) {
        if (out.roots.empty() || q - out.roots.back().value > 2.0 * tol) {
            out.roots.push_back({q, nl.force_derivative(q) > 0.0});
        }
    }
    if (out.roots.empty()) {
        std::ostringstream os;
        os << "F has no sign-change zero on [" << lo << ", " << hi
           << "]; attraction to a stationary state cannot be verified";
        out.warnings.push_back(os.str());
    }
    return out;
}

bool check_confining(const Nonlinearity& nl, double probe) {
    if (!(probe > 0.0)) {
        throw DomainError("check_confining requires probe > 0");
    }
    constexpr int kSamples = 6;
    for (double sign : {1.0, -1.0}) {
        double previous = -std::numeric_limits<double>::infinity();
        for (int k = kSamples - 1; k >= 0; --k) {
            const double z = sign * probe * std::ldexp(1.0, -k);
            const double u = nl.potential(z);
            if (!std::isfinite(u) || !(u > previous)) {
                return false;
            }
            previous = u;
        }
    }
    return true;
}

namespace {

// Outermost point of {U <= level} on the half line z = sign * s, s >= 0.
// Returns a negative value when that half line misses the sublevel set.
double outermost_sublevel(const Nonlinearity& nl, double level, double sign) {
    auto U = [&](double s) { return nl.potential(sign * s); };

    double outer = 1.0;
    while (!(U(outer) > level && sign * nl.force(sign * outer) > 0.0)) {
        outer *= 2.0;
        if (outer > 1e12) {
            throw ConfigurationError("potential is not confining: sublevel set is unbounded");
        }
    }

    constexpr std::size_t kCells = 10000;
    std::vector<double> samples;
    samples.reserve(kCells + 8);
    for (std::size_t i = 0; i <= kCells; ++i) {
        samples.push_back(outer * static_cast<double>(i) / static_cast<double>(kCells));
    }
    // Critical points catch sublevel sets that shrink to isolated minima.
    const RootSet critical = find_roots(nl, std::min(0.0, sign * outer),
                                        std::max(0.0, sign * outer), 1e-14, kCells);
    for (const auto& r : critical.roots) {
        samples.push_back(std::abs(r.value));
    }
    std::sort(samples.begin(), samples.end());

    for (std::size_t i = samples.size(); i-- > 0;) {
        if (U(samples[i]) <= level) {
            if (i + 1 == samples.size()) {
                return samples[i];
            }
            double a = samples[i];
            double b = samples[i + 1];
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
                const double mid = 0.5 * (a + b);
                (U(mid) <= level ? a : b) = mid;
            }
            return a;
        }
    }
    return -1.0;
}

} // namespace

double lambda_bound(const Nonlinearity& nl, double H0) {
    if (!std::isfinite(H0)) {
        throw DomainError("lambda_bound requires a finite energy");
    }
    if (!check_confining(nl)) {
        throw ConfigurationError("potential of '" + nl.descriptor() +
                                 "' is not confining; the amplitude bound would be infinite");
    }
    const double level = H0 + 1e-12 * std::max(1.0, std::abs(H0));
    const double plus = outermost_sublevel(nl, level, 1.0);
    const double minus = outermost_sublevel(nl, level, -1.0);
    const double lambda = std::max(plus, minus);
    if (lambda < 0.0) {
        std::ostringstream os;
        os << "energy " << H0 << " lies below the minimum of U; the sublevel set is empty";
        throw ConfigurationError(os.str());
    }
    return lambda;
}

TruncatedNonlinearity::TruncatedNonlinearity(Nonlinearity base, double lambda)
    : base_(std::move(base)), lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("truncation radius must be positive and finite");
    }
    u_hi_ = base_.potential(lambda_);
    f_hi_ = base_.force(lambda_);
    k_hi_ = std::max(base_.force_derivative(lambda_), kCurvatureFloor);
    u_lo_ = base_.potential(-lambda_);
    f_lo_ = base_.force(-lambda_);
    k_lo_ = std::max(base_.force_derivative(-lambda_), kCurvatureFloor);

    constexpr std::size_t kCells = 10000;
    const double h = 2.0 * lambda_ / static_cast<double>(kCells);
    double prev = std::abs(base_.force_derivative(-lambda_));
    double sup = std::max(k_hi_, k_lo_);
    for (std::size_t i = 1; i <= kCells; ++i) {
        const double z = (i == kCells) ? lambda_ : -lambda_ + h * static_cast<double>(i);
        const double cur = std::abs(base_.force_derivative(z));
        // Cell maximum bounded by the larger endpoint plus the endpoint variation.
        sup = std::max(sup, std::max(prev, cur) + std::abs(cur - prev));
        prev = cur;
    }
    lipschitz_ = sup;
}

double TruncatedNonlinearity::potential(double z) const {
    if (z > lambda_) {
        const double s = z - lambda_;
        return u_hi_ + f_hi_ * s + 0.5 * k_hi_ * s * s;
    }
    if (z < -lambda_) {
        const double s = z + lambda_;
        return u_lo_ + f_lo_ * s + 0.5 * k_lo_ * s * s;
    }
    return base_.potential(z);
}

double TruncatedNonlinearity::force(double z) const {
    if (z > lambda_) return f_hi_ + k_hi_ * (z - lambda_);
    if (z < -lambda_) return f_lo_ + k_lo_ * (z + lambda_);
    return base_.force(z);
}

double TruncatedNonlinearity::force_derivative(double z) const {
    if (z > lambda_) return k_hi_;
    if (z < -lambda_) return k_lo_;
    return base_.force_derivative(z);
}

TruncatedNonlinearity build_truncation(const Nonlinearity& nl, double lambda) {
    return TruncatedNonlinearity(nl, lambda);
}

} // namespace pointwave
