#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pointwave {

struct PotentialForce {
    double potential;
    double force;
};

/// A confining potential U together with the force F = U' and its derivative F'.
class Nonlinearity {
public:
    using Fn = std::function<double(double)>;

    Nonlinearity(std::string descriptor, Fn potential, Fn force, Fn force_derivative);

    /// F(z) = sum_k c_k z^k (constant term first); U is the antiderivative with U(0) = 0.
    static Nonlinearity polynomial(std::vector<double> force_coefficients,
                                   std::string descriptor = {});
    static Nonlinearity cubic();   // F = z^3 - z
    static Nonlinearity linear();  // F = z
    static Nonlinearity quintic(); // F = z^5 - z
    /// Built-in catalog lookup: "cubic", "linear", "quintic".
    static Nonlinearity from_name(std::string_view name);

    double potential(double z) const { return potential_(z); }
    double force(double z) const { return force_(z); }
    double force_derivative(double z) const { return force_derivative_(z); }
    const std::string& descriptor() const { return descriptor_; }

    /// (U(z), F(z)); throws DomainError on non-finite input or output.
    PotentialForce eval(double z) const;

private:
    std::string descriptor_;
    Fn potential_;
    Fn force_;
    Fn force_derivative_;
};

struct Root {
    double value;
    bool stable; // F'(value) > 0
};

/// Zeros of F found on a scan interval, sorted increasingly.
struct RootSet {
    std::vector<Root> roots;
    double bracket_tol = 0.0;
    std::vector<std::string> warnings;

    bool empty() const { return roots.empty(); }
    /// Root closest to z; throws if the set is empty.
    const Root& nearest(double z) const;
};

/// Sign-change bracketing on `cells` uniform cells followed by bisection to `tol`.
/// Even-multiplicity (tangential) roots are not guaranteed to be found.
RootSet find_roots(const Nonlinearity& nl, double lo, double hi, double tol,
                   std::size_t cells = 10000);

/// Heuristic confinement test: U must be increasing in |z| on geometrically spaced
/// samples probe / 32, probe / 16, ..., probe on both sides.
bool check_confining(const Nonlinearity& nl, double probe = 1e3);

/// Largest |z| with U(z) <= H0 (up to a relative energy slack of 1e-12).
/// Throws ConfigurationError for non-confining U or an empty sublevel set.
double lambda_bound(const Nonlinearity& nl, double H0);

/// U continued beyond +-Lambda by the quadratic matching U, U' and U'' at the
/// junction (curvature floored at kCurvatureFloor), so F~ = U~' is globally Lipschitz.
class TruncatedNonlinearity {
public:
    static constexpr double kCurvatureFloor = 1.0;

    TruncatedNonlinearity(Nonlinearity base, double lambda);

    const Nonlinearity& base() const { return base_; }
    double lambda() const { return lambda_; }
    double lipschitz_constant() const { return lipschitz_; }
    bool inside(double z) const { return z >= -lambda_ && z <= lambda_; }

    double potential(double z) const;
    double force(double z) const;
    double force_derivative(double z) const;

private:
    Nonlinearity base_;
    double lambda_;
    double lipschitz_ = 0.0;
    double u_hi_ = 0.0, f_hi_ = 0.0, k_hi_ = 0.0;
    double u_lo_ = 0.0, f_lo_ = 0.0, k_lo_ = 0.0;
};

TruncatedNonlinearity build_truncation(const Nonlinearity& nl, double lambda);

} // namespace pointwave
