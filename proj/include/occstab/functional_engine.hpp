#ifndef OCCSTAB_FUNCTIONAL_ENGINE_HPP
#define OCCSTAB_FUNCTIONAL_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "occstab/rng.hpp"
#include "occstab/stable_sim.hpp"
#include "occstab/test_functions.hpp"

namespace occstab {

enum class Normalization { first_law, second_law, rosen, log_n };

inline const char* normalization_name(Normalization n) {
    switch (n) {
    case Normalization::first_law: return "first_law";
    case Normalization::second_law: return "second_law";
    case Normalization::rosen: return "rosen";
    case Normalization::log_n: return "log_n";
    }
    return "?";
}

/// Horizon convention: the exponential-horizon laws integrate to e^{n t},
/// the polynomial ones to n t.
inline double horizon_for(Normalization norm, int n, double t) {
    switch (norm) {
    case Normalization::first_law:
    case Normalization::second_law: {
        const double e = static_cast<double>(n) * t;
        if (e > 700.0) throw ParameterError("horizon exp(n t) overflows for n t > 700");
        return std::exp(e);
    }
    case Normalization::rosen:
    case Normalization::log_n: return static_cast<double>(n) * t;
    }
    return 0.0;
}

inline double normalizer(Normalization norm, int n, double alpha) {
    switch (norm) {
    case Normalization::first_law: return 1.0 / static_cast<double>(n);
    case Normalization::second_law: return 1.0 / std::sqrt(static_cast<double>(n));
    case Normalization::rosen: return std::pow(static_cast<double>(n), (1.0 - alpha) / (2.0 * alpha));
    case Normalization::log_n: return 1.0 / std::log(static_cast<double>(n));
    }
    return 0.0;
}

/// Discretization knobs for path-coupled (hybrid) simulation.
///
/// Inside the switch zone |X| <= R the step is the uniform fine step. Outside
/// it the step grows multiplicatively by (1 + growth) per step but is capped
/// both by an absolute bound and by the distance-linked bound
/// (step_frac * (|X| - R))^alpha, which shrinks steps again whenever the path
/// drifts back toward the zone so that re-entries are caught promptly. All
/// caps are measured by the refinement tests; they are knobs, not constants.
struct SimParams {
    double fine_step = 0.05;
    double switch_radius = 0.0;  // 0 -> test function support radius + 2
    double growth = 0.05;        // multiplicative coarse-step ratio - 1
    double step_frac = 0.05;     // distance fraction in the coarse-step cap
    double max_step = 0.0;       // 0 -> horizon / 16
    double epsilon_local = 0.0;  // 0 -> sqrt(fine_step)

    double resolved_radius(const TestFunction& f) const {
        return switch_radius > 0.0 ? switch_radius : f.support_radius + 2.0;
    }
    double resolved_max_step(double horizon) const {
        return max_step > 0.0 ? max_step : std::max(fine_step, horizon / 16.0);
    }
    double resolved_epsilon() const {
        return epsilon_local > 0.0 ? epsilon_local : std::sqrt(fine_step);
    }
};

/// Streams the hybrid-grid simulation of X over [0, horizon]. The sink
/// receives each cell as (s, x, dt) where x = X(s) and the cell is
/// [s, s + dt); cells are clipped so that every value in `breakpoints`
/// (ascending, ending with the horizon) is hit exactly. Occupation sums over
/// [0, b_k] are therefore exact left-endpoint Riemann sums; there is no
/// interpolation anywhere. Returns X(horizon).
template <typename Sink>
double stream_hybrid_path(StabilityIndex alpha, double horizon, double switch_radius,
                          const SimParams& p, RngStream& rng, std::span<const double> breakpoints,
                          Sink&& sink) {
    if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
    const double cap = p.resolved_max_step(horizon);
    const double a = alpha.alpha;

    double s = 0.0;
    double x = 0.0;
    double dt_coarse = p.fine_step;
    std::size_t bp = 0;
    while (bp < breakpoints.size() && breakpoints[bp] <= 0.0) ++bp;

    while (s < horizon) {
        double dt;
        if (std::abs(x) <= switch_radius) {
            dt = p.fine_step;
            dt_coarse = p.fine_step;
        } else {
            const double dist = std::abs(x) - switch_radius;
            const double dist_cap = std::pow(p.step_frac * dist, a);
            dt_coarse = std::min(dt_coarse * (1.0 + p.growth), std::min(dist_cap, cap));
            dt = std::max(dt_coarse, p.fine_step);
        }
        if (bp < breakpoints.size()) dt = std::min(dt, breakpoints[bp] - s);
        dt = std::min(dt, horizon - s);

        sink(s, x, dt);
        x += sample_increment(alpha, dt, rng);
        s += dt;
        if (bp < breakpoints.size() && s >= breakpoints[bp]) {
            s = breakpoints[bp]; // land exactly on the breakpoint
            ++bp;
        }
    }
    return x;
}

/// Materialized hybrid path (grid + values), for the operations that take a
/// whole trajectory. The grid records the realized points and its declared
/// step bounds.
inline StablePath simulate_hybrid_path(StabilityIndex alpha, double horizon, double switch_radius,
                                       const SimParams& p, std::uint64_t master_seed,
                                       std::uint64_t path_index) {
    StablePath path;
    path.alpha = alpha.alpha;
    path.seed = master_seed;
    path.grid.kind = GridKind::hybrid;
    path.grid.fine_step = p.fine_step;
    path.grid.max_step = p.resolved_max_step(horizon);
    RngStream rng(master_seed, path_index);
    const double breakpoints[] = {horizon};
    const double x_end = stream_hybrid_path(alpha, horizon, switch_radius, p, rng, breakpoints,
                                            [&](double s, double x, double /*dt*/) {
                                                path.grid.points.push_back(s);
                                                path.values.push_back(x);
                                            });
    path.grid.points.push_back(horizon);
    path.values.push_back(x_end);
    return path;
}

/// Left-endpoint Riemann sum of f along the path over [a, b] in process time.
/// Cells are clipped at a and b; additivity at a grid point is exact and the
/// sum is linear in f by construction.
inline double occupation_integral(const StablePath& path, const TestFunction& f, double a, double b) {
    if (!(a < b)) throw ParameterError("occupation_integral needs a < b");
    const auto& pts = path.grid.points;
    if (pts.empty() || a < pts.front() - 1e-12 || b > pts.back() + 1e-12)
        throw ParameterError("[a,b] must lie inside the grid span");
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = std::max(pts[i], a);
        const double hi = std::min(pts[i + 1], b);
        if (hi <= lo) continue;
        const double term = f.eval(path.values[i]) * (hi - lo);
        const double y = term - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

/// One normalized functional draw.
struct FunctionalSample {
    double value = 0.0;
    Normalization normalization = Normalization::first_law;
    int n = 0;
    double t = 0.0;
    double alpha = 1.0;
    std::string f_id;
};

/// Core driver: one path, the raw occupation integrals int_0^{h_k} f(X) ds
/// at the checkpoint horizons h_k derived from each n in n_values (ascending).
/// Sharing one trajectory across the n-ladder gives coupled estimates, which
/// is what the convergence-trend checks want.
inline std::vector<double> raw_occupation_ladder(StabilityIndex alpha, const TestFunction& f,
                                                 Normalization norm, std::span<const int> n_values,
                                                 double t, const SimParams& p,
                                                 std::uint64_t master_seed, std::uint64_t path_index,
                                                 double start = 0.0) {
    if (n_values.empty()) throw ParameterError("need at least one n");
    std::vector<double> horizons;
    horizons.reserve(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw ParameterError("n_values must be strictly increasing");
        horizons.push_back(horizon_for(norm, n_values[i], t));
    }

    const double R = p.resolved_radius(f);
    RngStream rng(master_seed, path_index);
    std::vector<double> integrals(horizons.size(), 0.0);
    double acc = 0.0, comp = 0.0;
    std::size_t k = 0;
    stream_hybrid_path(alpha, horizons.back(), R, p, rng, horizons,
                       [&](double s, double x, double dt) {
                           double weight = dt;
                           if (s < start) weight = std::max(0.0, s + dt - start);
                           if (weight > 0.0) {
                               const double term = f.eval(x) * weight;
                               const double y = term - comp;
                               const double tt = acc + y;
                               comp = (tt - acc) - y;
                               acc = tt;
                           }
                           while (k < horizons.size() && s + dt >= horizons[k] - 1e-12 * horizons[k]) {
                               integrals[k] = acc;
                               ++k;
                           }
                       });
    while (k < horizons.size()) integrals[k++] = acc;
    return integrals;
}

inline FunctionalSample make_sample(double raw, Normalization norm, int n, double t, double alpha,
                                    const std::string& f_id) {
    FunctionalSample s;
    s.value = raw * normalizer(norm, n, alpha);
    s.normalization = norm;
    s.n = n;
    s.t = t;
    s.alpha = alpha;
    s.f_id = f_id;
    return s;
}

namespace detail {
inline void require_integrable(const TestFunction& f) {
    if (!std::isfinite(f.abs_first_moment) || !std::isfinite(f.integral_f))
        throw ParameterError("test function must declare finite integrability metadata");
}
} // namespace detail

/// (1/n) int_0^{e^{nt}} f(X(s)) ds for the Cauchy process.
inline FunctionalSample first_law_sample(int n, double t, const TestFunction& f,
                                         std::uint64_t seed, const SimParams& p = {},
                                         std::uint64_t path_index = 0) {
    if (n < 1 || !(t > 0.0)) throw ParameterError("first_law_sample needs n >= 1, t > 0");
    detail::require_integrable(f);
    const int ns[] = {n};
    const double raw = raw_occupation_ladder(StabilityIndex(1.0), f, Normalization::first_law,
                                             ns, t, p, seed, path_index)[0];
    return make_sample(raw, Normalization::first_law, n, t, 1.0, f.id);
}

/// (1/sqrt n) int_0^{e^{nt}} f(X(s)) ds, mean-zero f, Cauchy process.
inline FunctionalSample second_law_sample(int n, double t, const TestFunction& f,
                                          std::uint64_t seed, const SimParams& p = {},
                                          std::uint64_t path_index = 0) {
    if (n < 1 || !(t > 0.0)) throw ParameterError("second_law_sample needs n >= 1, t > 0");
    detail::require_integrable(f);
    if (!f.mean_zero) throw ParameterError("second_law_sample requires a mean-zero test function");
    const int ns[] = {n};
    const double raw = raw_occupation_ladder(StabilityIndex(1.0), f, Normalization::second_law,
                                             ns, t, p, seed, path_index)[0];
    return make_sample(raw, Normalization::second_law, n, t, 1.0, f.id);
}

/// n^{(1-alpha)/(2 alpha)} int_0^{nt} f(X(s)) ds for alpha in (1, 2].
inline FunctionalSample rosen_sample(double alpha, int n, double t, const TestFunction& f,
                                     std::uint64_t seed, const SimParams& p = {},
                                     std::uint64_t path_index = 0) {
    if (!(alpha > 1.0) || !(alpha <= 2.0))
        throw ParameterError("rosen_sample requires alpha in (1, 2]");
    if (n < 1 || !(t > 0.0)) throw ParameterError("rosen_sample needs n >= 1, t > 0");
    detail::require_integrable(f);
    if (!f.mean_zero) throw ParameterError("rosen_sample requires a mean-zero test function");
    const int ns[] = {n};
    const double raw = raw_occupation_ladder(StabilityIndex(alpha), f, Normalization::rosen, ns, t,
                                             p, seed, path_index)[0];
    return make_sample(raw, Normalization::rosen, n, t, alpha, f.id);
}

/// (1/log n) int_0^{nt} f(X(s)) ds, Cauchy process; the limit is t-free.
inline FunctionalSample logn_sample(int n, double t, const TestFunction& f, std::uint64_t seed,
                                    const SimParams& p = {}, std::uint64_t path_index = 0) {
    if (n < 3 || !(t > 0.0)) throw ParameterError("logn_sample needs n >= 3, t > 0");
    detail::require_integrable(f);
    const int ns[] = {n};
    const double raw = raw_occupation_ladder(StabilityIndex(1.0), f, Normalization::log_n, ns, t,
                                             p, seed, path_index)[0];
    return make_sample(raw, Normalization::log_n, n, t, 1.0, f.id);
}

/// Local-time estimator (1/2 eps) Leb{s <= t : |X(s)| <= eps} on a
/// materialized path; requires alpha > 1 for L_t(0) to exist.
inline double local_time_estimate(const StablePath& path, double t, double epsilon) {
    if (!(path.alpha > 1.0))
        throw ParameterError("local time exists only for alpha > 1");
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    const auto& pts = path.grid.points;
    if (pts.empty() || t > pts.back() + 1e-12) throw ParameterError("t beyond grid span");
    double occ = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = std::min(pts[i + 1], t);
        if (hi <= lo) break;
        if (std::abs(path.values[i]) <= epsilon) occ += hi - lo;
    }
    return occ / (2.0 * epsilon);
}

} // namespace occstab

#endif // OCCSTAB_FUNCTIONAL_ENGINE_HPP
