#ifndef OCCSTAB_LIMIT_TARGETS_HPP
#define OCCSTAB_LIMIT_TARGETS_HPP

#include <cmath>
#include <complex>

#include "occstab/rng.hpp"
#include "occstab/stable_sim.hpp" // ParameterError

namespace occstab {

/// Target limiting laws for the normalized occupation functionals.
///
/// "Exponential with parameter t" is read as MEAN t (rate 1/t): that is the
/// only reading consistent with the moment formula E Z(t)^m = m! t^m, and it
/// is what every moment, CDF and sampler below implements.
///
/// The mixed-Gaussian law sqrt(Z(t)) * eta (Z exponential of mean t, eta
/// standard normal, independent) is exactly a Laplace distribution with scale
/// b = sqrt(t/2): its CF is E exp(-Z u^2 / 2) = (1 + t u^2 / 2)^{-1}. The
/// closed form keeps KS comparisons exact. A multiplicative `scale` is
/// applied on top of the base law in all three interfaces.
struct LimitLaw {
    enum class Kind { exponential, mixed_gaussian };
    Kind kind;
    double t;
    double scale;

    static LimitLaw exponential(double t, double scale = 1.0) {
        if (!(t > 0.0)) throw ParameterError("limit law needs t > 0");
        return {Kind::exponential, t, scale};
    }
    static LimitLaw mixed_gaussian(double t, double scale = 1.0) {
        if (!(t > 0.0)) throw ParameterError("limit law needs t > 0");
        return {Kind::mixed_gaussian, t, scale};
    }
};

/// Exact m-th moment, scale included.
inline double law_moment(const LimitLaw& law, int m) {
    if (m < 1) throw ParameterError("law_moment needs m >= 1");
    if (law.kind == LimitLaw::Kind::exponential) {
        double v = 1.0;
        for (int k = 1; k <= m; ++k) v *= static_cast<double>(k) * law.t;
        return v * std::pow(law.scale, m); // m! t^m
    }
    if (m % 2 == 1) return 0.0;
    // E (sqrt(Z) eta)^m = m! t^{m/2} / 2^{m/2} for even m
    double v = 1.0;
    for (int k = 1; k <= m; ++k) v *= static_cast<double>(k);
    return v * std::pow(law.t, m / 2) / std::pow(2.0, m / 2) * std::pow(law.scale, m);
}

inline double law_cdf(const LimitLaw& law, double x) {
    if (!(law.scale > 0.0)) throw ParameterError("law_cdf requires scale > 0");
    if (law.kind == LimitLaw::Kind::exponential) {
        if (x < 0.0) return 0.0;
        return -std::expm1(-x / (law.scale * law.t));
    }
    const double b = law.scale * std::sqrt(0.5 * law.t);
    if (x < 0.0) return 0.5 * std::exp(x / b);
    return 1.0 - 0.5 * std::exp(-x / b);
}

inline double law_sample(const LimitLaw& law, RngStream& rng) {
    if (law.kind == LimitLaw::Kind::exponential) return law.scale * law.t * rng.exponential();
    const double z = law.t * rng.exponential();
    return law.scale * std::sqrt(z) * rng.normal();
}

/// Characteristic function of the target law.
inline std::complex<double> law_cf(const LimitLaw& law, double u) {
    if (law.kind == LimitLaw::Kind::exponential)
        return 1.0 / std::complex<double>(1.0, -law.scale * law.t * u);
    return {1.0 / (1.0 + 0.5 * law.scale * law.scale * law.t * u * u), 0.0};
}

} // namespace occstab

#endif // OCCSTAB_LIMIT_TARGETS_HPP
