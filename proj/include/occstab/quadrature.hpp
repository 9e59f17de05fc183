#ifndef OCCSTAB_QUADRATURE_HPP
#define OCCSTAB_QUADRATURE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace occstab {

/// Numerical failure that carries the tolerance actually achieved.
struct NumericalError : std::runtime_error {
    double achieved;
    NumericalError(const std::string& what, double achieved_tol)
        : std::runtime_error(what), achieved(achieved_tol) {}
};

/// A quadrature value together with its error estimate.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;

    QuadResult& operator+=(const QuadResult& other) {
        value += other.value;
        error += other.error;
        return *this;
    }
    QuadResult operator*(double c) const { return {c * value, std::abs(c) * error}; }
};

struct QuadOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
    int max_depth = 14;
};

/// Adaptive Gauss-Kronrod over a finite interval.
template <typename F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, static_cast<unsigned>(opts.max_depth), opts.rel_tol, &err);
    return {v, err};
}

/// Same integral in log coordinates, for integrands carrying d y / y mass
/// across many decades. Requires 0 < a < b.
template <typename F>
QuadResult integrate_log(F&& f, double a, double b, const QuadOptions& opts = {}) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("integrate_log needs 0 < a < b");
    auto g = [&f](double v) {
        const double y = std::exp(v);
        return f(y) * y;
    };
    return integrate(g, std::log(a), std::log(b), opts);
}

/// tanh-sinh rule: tolerant of integrable endpoint singularities on [a, b].
template <typename F>
QuadResult integrate_singular(F&& f, double a, double b, const QuadOptions& opts = {}) {
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    double err = 0.0, l1 = 0.0;
    const double v = rule.integrate(f, a, b, opts.rel_tol, &err, &l1);
    return {v, err * l1};
}

// ---------------------------------------------------------------------------
// Stable building blocks for integrals of exponentials of linear functions.
// All exponents evaluated below are <= 0 by construction in the call sites,
// and differences go through expm1, so there is no overflow or catastrophic
// cancellation for horizon values as large as exp(700).
// ---------------------------------------------------------------------------

/// phi(z) = (1 - e^{-z}) / z, phi(0) = 1. Valid for z of either sign.
inline double expm1_ratio(double z) {
    if (z == 0.0) return 1.0;
    return -std::expm1(-z) / z;
}

/// E1s(z) = (1 - (1+z) e^{-z}) / z^2  ->  1/2 at z = 0.
inline double expm1_ratio2(double z) {
    if (std::abs(z) < 1e-4) {
        // sum_{k>=0} (-1)^k z^k (k+1)/(k+2)!
        return 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
    }
    return (1.0 - (1.0 + z) * std::exp(-z)) / (z * z);
}

/// E2s(z) = (2 - (2 + 2z + z^2) e^{-z}) / z^3  ->  1/3 at z = 0.
inline double expm1_ratio3(double z) {
    if (std::abs(z) < 1e-3) {
        // sum_{k>=0} (-1)^k z^k (k+1)(k+2)/(k+3)!
        return 1.0 / 3.0 - z / 4.0 + z * z / 10.0 - z * z * z / 36.0;
    }
    return (2.0 - (2.0 + 2.0 * z + z * z) * std::exp(-z)) / (z * z * z);
}

/// exp_segment(p, q, lo, hi) = integral over [lo, hi] of e^{p + q s} ds,
/// anchored at whichever endpoint carries the larger exponent.
inline double exp_segment(double p, double q, double lo, double hi) {
    const double len = hi - lo;
    if (len <= 0.0) return 0.0;
    if (q == 0.0) return len * std::exp(p);
    if (q < 0.0) return std::exp(p + q * lo) * len * expm1_ratio(-q * len);
    return std::exp(p + q * hi) * len * expm1_ratio(q * len);
}

/// linexp_moment(a, lo, hi, H) = integral over [lo, hi] of e^{-a u} (H - u) du.
inline double linexp_moment(double a, double lo, double hi, double H) {
    const double len = hi - lo;
    if (len <= 0.0) return 0.0;
    // shift w = u - lo: e^{-a lo} * int_0^len e^{-a w} (H - lo - w) dw
    const double z = a * len;
    const double head = (H - lo) * len * expm1_ratio(z);
    const double tail = len * len * expm1_ratio2(z);
    return std::exp(-a * lo) * (head - tail);
}

/// occupancy_kernel(a, b, lo, T) =
///   integral over lo < s1 < s2 < T of e^{-a s1 - b (s2 - s1)} ds2 ds1
///   = int_lo^T e^{-a s} (1 - e^{-b (T - s)}) / b ds.
/// This is the two-time kernel shared by the second-moment quadratures; it is
/// exact for any a, b >= 0 including the b -> 0 ridge.
inline double occupancy_kernel(double a, double b, double lo, double T) {
    const double tau = T - lo;
    if (tau <= 0.0) return 0.0;
    if (b * tau < 1e-4) {
        // (1 - e^{-b(T-s)})/b = (T-s) - b (T-s)^2/2 + O(b^2 (T-s)^3).
        // i0 = int e^{-a s}(T-s) ds, and the first-order correction enters
        // through the ratio i1/i0 <= tau so no tau^3 is ever formed.
        const double z = a * tau;
        const double pe = expm1_ratio(z) - expm1_ratio2(z);
        double i0;
        if (z > 1.0)
            i0 = std::exp(-a * lo) * (tau / a) * (z * pe);
        else
            i0 = std::exp(-a * lo) * tau * tau * pe;
        const double r2 = expm1_ratio(z) - 2.0 * expm1_ratio2(z) + expm1_ratio3(z);
        const double ratio = tau * (r2 / pe); // i1/i0
        return i0 * (1.0 - 0.5 * b * ratio);
    }
    const double term1 = exp_segment(0.0, -a, lo, T);
    const double term2 = exp_segment(-b * T, b - a, lo, T);
    return (term1 - term2) / b;
}

// ---------------------------------------------------------------------------
// Exponential integrals.
// ---------------------------------------------------------------------------

inline constexpr double euler_gamma = 0.57721566490153286060651209;

/// Ein(x) = integral_0^x (1 - e^{-v})/v dv, for x >= 0.
inline double ein(double x) {
    if (x < 0.0) throw std::invalid_argument("ein defined for x >= 0");
    if (x == 0.0) return 0.0;
    if (x < 1e-3) {
        double term = x, sum = 0.0;
        for (int k = 1; k <= 8; ++k) {
            sum += term / k;
            term *= -x / (k + 1);
        }
        return sum;
    }
    const double e1 = (x > 700.0) ? 0.0 : boost::math::expint(1, x);
    return euler_gamma + std::log(x) + e1;
}

/// E1(x), exposed for the h-integral identity checks.
inline double expint_e1(double x) {
    if (x > 700.0) return 0.0;
    return boost::math::expint(1, x);
}

} // namespace occstab

#endif // OCCSTAB_QUADRATURE_HPP
