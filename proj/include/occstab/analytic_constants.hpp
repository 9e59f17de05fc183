#ifndef OCCSTAB_ANALYTIC_CONSTANTS_HPP
#define OCCSTAB_ANALYTIC_CONSTANTS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "occstab/quadrature.hpp"
#include "occstab/test_functions.hpp"

namespace occstab {

/// fhat(u) = int e^{iux} f(x) dx. Uses the attached analytic transform when
/// present, otherwise adaptive quadrature over the support.
inline std::complex<double> fourier_transform(const TestFunction& f, double u,
                                              const QuadOptions& opts = {}) {
    if (f.fourier) return f.fourier(u);
    const double R = f.support_radius;
    auto re = integrate([&](double x) { return std::cos(u * x) * f.eval(x); }, -R, R, opts);
    auto im = integrate([&](double x) { return std::sin(u * x) * f.eval(x); }, -R, R, opts);
    const double err = re.error + im.error;
    if (err > 1e3 * (opts.abs_tol + opts.rel_tol * (std::abs(re.value) + std::abs(im.value))))
        throw NumericalError("fourier_transform quadrature did not converge", err);
    return {re.value, im.value};
}

inline double fourier_power(const TestFunction& f, double u) {
    return std::norm(fourier_transform(f, u));
}

/// K1(f) = (1/pi) int f.
inline QuadResult k1(const TestFunction& f) {
    return {f.integral_f / pi_v, 0.0};
}

namespace detail {

/// Frequency beyond which |fhat|^2 stops contributing. Scans outward in
/// octaves; the quartic-or-faster decay of every supported transform makes
/// the tail bound |fhat(X)|^2 * X conservative.
inline double frequency_cutoff(const TestFunction& f, double weight_power,
                               double* tail_bound = nullptr) {
    double X = 8.0;
    while (X < 4096.0) {
        const double w = std::pow(X, -weight_power);
        if (fourier_power(f, X) * w * X < 1e-14 && fourier_power(f, 0.83 * X) * w * X < 1e-14)
            break;
        X *= 2.0;
    }
    if (tail_bound) *tail_bound = fourier_power(f, X) * std::pow(X, 1.0 - weight_power);
    return X;
}

/// int_0^inf |fhat(y)|^2 y^{-p} dy for p in [1, 2); the integrand vanishes at
/// the origin because fhat(0) = 0 for mean-zero f.
inline QuadResult halfline_power_integral(const TestFunction& f, double p,
                                          const QuadOptions& opts) {
    double tail = 0.0;
    const double X = frequency_cutoff(f, p, &tail);
    auto g = [&](double y) {
        if (y < 1e-100) return 0.0; // integrand ~ y^{2-p} -> 0 for mean-zero f
        return fourier_power(f, y) * std::pow(y, -p);
    };
    QuadResult head = integrate_singular(g, 0.0, 1.0, opts);
    QuadResult body = integrate(g, 1.0, X, opts);
    QuadResult total = head;
    total += body;
    total.error += tail;
    return total;
}

} // namespace detail

/// K2(f) = (1/pi^2) int_R |fhat(x)|^2 |x|^{-1} dx; requires mean-zero f so the
/// integrand is bounded at the origin.
inline QuadResult k2(const TestFunction& f, const QuadOptions& opts = {}) {
    if (!f.mean_zero) throw ParameterError("k2 requires a mean-zero test function");
    QuadResult half = detail::halfline_power_integral(f, 1.0, opts);
    return (half * 2.0) * (1.0 / (pi_v * pi_v));
}

/// k_alpha(f, alpha) = (1/pi) int_R |fhat(x)|^2 |x|^{-alpha} dx for
/// alpha in [1, 2). At alpha = 1 this equals pi * k2 by definition.
inline QuadResult k_alpha(const TestFunction& f, double alpha, const QuadOptions& opts = {}) {
    if (!f.mean_zero) throw ParameterError("k_alpha requires a mean-zero test function");
    if (!(alpha >= 1.0) || !(alpha < 2.0))
        throw ParameterError("k_alpha requires alpha in [1, 2)");
    QuadResult half = detail::halfline_power_integral(f, alpha, opts);
    return (half * 2.0) * (1.0 / pi_v);
}

/// Density of X(1) by cosine inversion: p1(x) = (1/pi) int_0^inf cos(xu) e^{-u^alpha} du.
inline double stable_density(double alpha, double x, const QuadOptions& opts = {}) {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw ParameterError("stable_density requires alpha in (0, 2]");
    if (!std::isfinite(x)) throw ParameterError("stable_density requires finite x");
    const double u_max = std::pow(40.0, 1.0 / alpha) + 4.0;
    QuadOptions dense = opts;
    dense.rel_tol = std::min(opts.rel_tol, 1e-10);
    dense.max_depth = 17;
    auto q = integrate([&](double u) { return std::cos(x * u) * std::exp(-std::pow(u, alpha)); },
                       0.0, u_max, dense);
    if (q.error > 1e-6) throw NumericalError("stable_density quadrature failed", q.error);
    return q.value / pi_v;
}

/// P(|X(1)| <= R) via the inversion formula (2/pi) int_0^inf sin(Ru)/u e^{-u^alpha} du.
/// Independent of the pointwise density route; used to validate normalization.
inline double stable_interval_mass(double alpha, double R, const QuadOptions& opts = {}) {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw ParameterError("stable_interval_mass requires alpha in (0, 2]");
    const double u_max = std::pow(40.0, 1.0 / alpha) + 4.0;
    QuadOptions dense = opts;
    dense.rel_tol = std::min(opts.rel_tol, 1e-10);
    dense.max_depth = 18;
    auto q = integrate(
        [&](double u) {
            const double s = (u * R < 1e-8) ? R : std::sin(R * u) / u;
            return s * std::exp(-std::pow(u, alpha));
        },
        0.0, u_max, dense);
    return 2.0 * q.value / pi_v;
}

/// c(alpha) = int_0^inf (p1(0) - p1(1/s^{1/alpha})) s^{-1/alpha} ds, evaluated
/// after the substitution v = s^{-1/alpha} as alpha * int_0^inf (p1(0)-p1(v)) v^{-alpha} dv.
/// The difference is computed as (1/pi) int 2 sin^2(vu/2) e^{-u^alpha} du so
/// small v never cancels; the v-tail beyond V is added in closed form.
inline QuadResult rosen_c(double alpha, const QuadOptions& opts = {}) {
    if (!(alpha > 1.0) || !(alpha < 3.0)) throw ParameterError("rosen_c requires alpha in (1, 3)");
    const double u_max = std::pow(40.0, 1.0 / alpha) + 4.0;
    QuadOptions dense = opts;
    dense.max_depth = 17;
    dense.rel_tol = std::min(opts.rel_tol, 1e-9);

    auto pdiff = [&](double v) { // p1(0) - p1(v) >= 0
        auto q = integrate(
            [&](double u) {
                const double s = std::sin(0.5 * v * u);
                return 2.0 * s * s * std::exp(-std::pow(u, alpha));
            },
            0.0, u_max, dense);
        return q.value / pi_v;
    };

    const double V = 64.0;
    QuadResult head = integrate_singular(
        [&](double v) {
            if (v < 1e-100) return 0.0; // pdiff ~ v^2 beats the v^{-alpha} weight
            return pdiff(v) * std::pow(v, -alpha);
        },
        0.0, 1.0, opts);
    QuadResult body = integrate([&](double v) { return pdiff(v) * std::pow(v, -alpha); }, 1.0, V, opts);

    const double p0 = stable_density(alpha, 0.0, opts);
    // int_V^inf p1(0) v^{-alpha} dv minus the residual density tail
    // int_V^inf p1(v) v^{-alpha} dv ~ K V^{-2 alpha} / (2 alpha) with
    // K = alpha Gamma(alpha) sin(pi alpha / 2) / pi (series tail of p1).
    const double tail_main = p0 * std::pow(V, 1.0 - alpha) / (alpha - 1.0);
    const double K = alpha * boost::math::tgamma(alpha) * std::sin(0.5 * pi_v * alpha) / pi_v;
    const double tail_density = K * std::pow(V, -2.0 * alpha) / (2.0 * alpha);

    QuadResult total = head;
    total += body;
    total.value += tail_main - tail_density;
    total.error += tail_density * 0.5;
    return total * alpha;
}

/// Energy form <f,f>_{alpha-1} = -int int f(x) f(y) |x-y|^{alpha-1} dx dy,
/// positive for mean-zero f. Inner integral split at the |x-y| kink.
inline QuadResult energy_form(const TestFunction& f, double alpha, const QuadOptions& opts = {}) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw ParameterError("energy_form requires alpha in (1, 2)");
    if (!f.mean_zero) throw ParameterError("energy_form requires a mean-zero test function");
    const double R = f.support_radius;
    const double beta = alpha - 1.0;
    QuadOptions inner_opts = opts;
    inner_opts.rel_tol = std::min(opts.rel_tol, 1e-9);
    double max_inner_err = 0.0;
    auto inner = [&](double x) {
        auto g = [&](double y) { return f.eval(y) * std::pow(std::abs(x - y), beta); };
        auto left = integrate(g, -R, x, inner_opts);
        auto right = integrate(g, x, R, inner_opts);
        max_inner_err = std::max(max_inner_err, left.error + right.error);
        return left.value + right.value;
    };
    auto outer = integrate([&](double x) { return f.eval(x) * inner(x); }, -R, R, opts);
    return {-outer.value, outer.error + 2.0 * R * max_inner_err};
}

/// E L_t(0) = alpha Gamma(1 + 1/alpha) / (pi (alpha - 1)) * t^{1 - 1/alpha},
/// using int_R e^{-|y|^alpha} dy = 2 Gamma(1 + 1/alpha).
inline double expected_local_time(double alpha, double t) {
    if (!(alpha > 1.0)) throw ParameterError("local time diverges for alpha <= 1");
    if (!(t > 0.0)) throw ParameterError("expected_local_time requires t > 0");
    return alpha * boost::math::tgamma(1.0 + 1.0 / alpha) / (pi_v * (alpha - 1.0)) *
           std::pow(t, 1.0 - 1.0 / alpha);
}

/// Plancherel residual |(1/2pi) int |fhat|^2 - int f^2| / int f^2.
inline double plancherel_residual(const TestFunction& f, const QuadOptions& opts = {}) {
    double tail = 0.0;
    const double X = detail::frequency_cutoff(f, 0.0, &tail);
    auto freq = integrate([&](double u) { return fourier_power(f, u); }, 0.0, X, opts);
    const double lhs = freq.value / pi_v; // two half-lines over 2 pi
    const double R = f.support_radius;
    auto space = integrate([&](double x) { return f.eval(x) * f.eval(x); }, -R, R, opts);
    return std::abs(lhs - space.value) / space.value;
}

/// Cross-check of the two variance normalizations for alpha in (1, 2):
/// r(h) = k_alpha(h) / <h,h>_{alpha-1} should not depend on h and should
/// equal 2 c(alpha).
struct RosenIdentityReport {
    double r_f = 0.0;
    double r_g = 0.0;
    double rel_difference = 0.0; // |r_f - r_g| / r_f
    double two_c = 0.0;
    double rel_to_two_c = 0.0; // |r_f - 2c| / (2c)
};

inline RosenIdentityReport rosen_identity(const TestFunction& f, const TestFunction& g,
                                          double alpha, const QuadOptions& opts = {}) {
    RosenIdentityReport rep;
    rep.r_f = k_alpha(f, alpha, opts).value / energy_form(f, alpha, opts).value;
    rep.r_g = k_alpha(g, alpha, opts).value / energy_form(g, alpha, opts).value;
    rep.rel_difference = std::abs(rep.r_f - rep.r_g) / std::abs(rep.r_f);
    rep.two_c = 2.0 * rosen_c(alpha, opts).value;
    rep.rel_to_two_c = std::abs(rep.r_f - rep.two_c) / rep.two_c;
    return rep;
}

} // namespace occstab

#endif // OCCSTAB_ANALYTIC_CONSTANTS_HPP
