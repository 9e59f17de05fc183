#ifndef OCCSTAB_STABLE_SIM_HPP
#define OCCSTAB_STABLE_SIM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "occstab/rng.hpp"

namespace occstab {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Stability index of a symmetric alpha-stable process, CF convention
/// E exp(i u X(t)) = exp(-t |u|^alpha). alpha=1 is the Cauchy process,
/// alpha=2 a Brownian motion with variance 2t.
struct StabilityIndex {
    double alpha;

    explicit StabilityIndex(double a) : alpha(a) {
        if (!(a > 0.0) || !(a <= 2.0))
            throw ParameterError("stability index must lie in (0,2], got " + std::to_string(a));
    }

    bool is_cauchy() const { return alpha == 1.0; }
    bool is_gaussian() const { return alpha == 2.0; }
};

enum class GridKind { uniform, geometric, hybrid };

/// Strictly increasing time grid on [0, horizon]. Hybrid grids are
/// path-coupled (step size depends on the simulated state) and are emitted by
/// the functional engine, not by build_grid; they still carry their declared
/// step bounds for validation.
struct TimeGrid {
    GridKind kind = GridKind::uniform;
    std::vector<double> points;
    double fine_step = 0.0; // declared min-step bound (hybrid/geometric)
    double max_step = 0.0;  // declared max-step bound (0 = unbounded)

    double horizon() const { return points.empty() ? 0.0 : points.back(); }

    void validate() const {
        if (points.empty()) throw ParameterError("empty time grid");
        if (points.front() < 0.0) throw ParameterError("grid must start at a nonnegative time");
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (!(points[i] > points[i - 1]))
                throw ParameterError("grid points must be strictly increasing");
        }
    }
};

/// One simulated trajectory: values[i] = X(points[i]). Regenerating from
/// (seed, grid, alpha) reproduces values bit-exactly.
struct StablePath {
    TimeGrid grid;
    std::vector<double> values;
    double alpha = 1.0;
    std::uint64_t seed = 0;
};

/// One increment X(t+dt) - X(t) of the unit symmetric alpha-stable process.
///
/// General alpha uses the Chambers-Mallows-Stuck construction; alpha=1 and
/// alpha=2 take exact dedicated branches (scaled tangent, Gaussian with
/// variance 2*dt) instead of the CMS removable-singularity path.
inline double sample_increment(StabilityIndex alpha, double dt, RngStream& rng) {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    const double a = alpha.alpha;
    if (a == 1.0) {
        return dt * std::tan(rng.uniform_angle());
    }
    if (a == 2.0) {
        return std::sqrt(2.0 * dt) * rng.normal();
    }
    const double u = rng.uniform_angle();
    const double w = rng.exponential();
    const double x = std::sin(a * u) / std::pow(std::cos(u), 1.0 / a) *
                     std::pow(std::cos((1.0 - a) * u) / w, (1.0 - a) / a);
    return std::pow(dt, 1.0 / a) * x;
}

/// Path over a fixed grid from independent stable increments. Pure function
/// of (alpha, grid, seed).
inline StablePath simulate_path(StabilityIndex alpha, const TimeGrid& grid, std::uint64_t seed) {
    grid.validate();
    StablePath path;
    path.grid = grid;
    path.alpha = alpha.alpha;
    path.seed = seed;
    path.values.resize(grid.points.size());

    RngStream rng(seed, 0);
    double x = 0.0;
    double prev = 0.0;
    // X(0) = 0; a grid starting at t0 > 0 gets the increment over [0, t0].
    if (grid.points.front() > 0.0) x += sample_increment(alpha, grid.points.front(), rng);
    prev = grid.points.front();
    path.values[0] = (grid.points.front() == 0.0) ? 0.0 : x;
    for (std::size_t i = 1; i < grid.points.size(); ++i) {
        x += sample_increment(alpha, grid.points[i] - prev, rng);
        prev = grid.points[i];
        path.values[i] = x;
    }
    return path;
}

/// Deterministic grids covering [0, horizon].
///  - uniform: step = fine_step, last step clipped so the final point is the
///    horizon exactly.
///  - geometric: uniform with step fine_step up to switch_time, then grid
///    points grow geometrically, t_{k+1} = t_k * (1 + coarse_factor), capped
///    at the horizon. Left-endpoint steps then satisfy step <= coarse_factor * t.
/// Hybrid grids are path-coupled; requesting one here is a parameter error.
inline TimeGrid build_grid(double horizon, double fine_step, double coarse_factor,
                           GridKind mode, double switch_time = 1.0) {
    if (!(fine_step > 0.0) || !(fine_step < horizon))
        throw ParameterError("need 0 < fine_step < horizon");
    TimeGrid grid;
    grid.kind = mode;
    grid.fine_step = fine_step;

    const double eps = 1e-12 * horizon;
    switch (mode) {
    case GridKind::uniform: {
        grid.max_step = fine_step;
        const auto n = static_cast<std::size_t>(std::ceil(horizon / fine_step));
        grid.points.reserve(n + 1);
        for (std::size_t i = 0; i < n; ++i) grid.points.push_back(static_cast<double>(i) * fine_step);
        grid.points.push_back(horizon);
        if (grid.points.size() >= 2 && grid.points[grid.points.size() - 2] >= horizon - eps)
            grid.points.erase(grid.points.end() - 2);
        break;
    }
    case GridKind::geometric: {
        if (!(coarse_factor > 0.0)) throw ParameterError("geometric grid needs coarse_factor > 0");
        double t = 0.0;
        while (t < switch_time && t < horizon - eps) {
            grid.points.push_back(t);
            t += fine_step;
        }
        t = std::min(t, switch_time);
        while (t < horizon - eps) {
            grid.points.push_back(t);
            t *= (1.0 + coarse_factor);
        }
        grid.points.push_back(horizon);
        grid.max_step = coarse_factor * horizon;
        break;
    }
    case GridKind::hybrid:
        throw ParameterError("hybrid grids are path-coupled; they are produced by the functional engine");
    }
    grid.validate();
    return grid;
}

/// Right-hand side of the multi-time CF identity for ordered times
/// 0 = s_0 < s_1 < ... < s_m:
///   E exp(i sum_k x_k X(s_k)) = exp(-sum_i |sum_{j>=i} x_j|^alpha (s_i - s_{i-1})).
inline double multitime_cf(StabilityIndex alpha, std::span<const double> freqs,
                           std::span<const double> times) {
    if (freqs.size() != times.size()) throw ParameterError("frequency/time lists must match");
    double exponent = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > prev) && !(i == 0 && times[i] == 0.0))
            throw ParameterError("times must be strictly increasing and positive");
        double tail = 0.0;
        for (std::size_t j = i; j < freqs.size(); ++j) tail += freqs[j];
        exponent += std::pow(std::abs(tail), alpha.alpha) * (times[i] - prev);
        prev = times[i];
    }
    return std::exp(-exponent);
}

/// Monte-Carlo estimate of E exp(i sum_k x_k X(s_k)) over a path ensemble.
/// Times must be exact grid points of every path; the CF check never
/// interpolates. Accumulation is compensated and in path order, so the result
/// does not depend on how paths were produced across workers.
inline std::complex<double> empirical_cf(std::span<const StablePath> paths,
                                         std::span<const double> freqs,
                                         std::span<const double> times) {
    if (paths.empty()) throw ParameterError("empirical_cf needs at least one path");
    if (freqs.size() != times.size()) throw ParameterError("frequency/time lists must match");

    std::vector<std::size_t> idx(times.size());
    const auto& pts = paths.front().grid.points;
    for (std::size_t k = 0; k < times.size(); ++k) {
        auto it = std::lower_bound(pts.begin(), pts.end(), times[k]);
        if (it == pts.end() || *it != times[k])
            throw ParameterError("time " + std::to_string(times[k]) + " is not a grid point");
        idx[k] = static_cast<std::size_t>(it - pts.begin());
    }

    double sum_re = 0.0, c_re = 0.0, sum_im = 0.0, c_im = 0.0;
    for (const auto& p : paths) {
        if (p.grid.points.size() != pts.size())
            throw ParameterError("paths must share one grid for CF estimation");
        double phase = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) phase += freqs[k] * p.values[idx[k]];
        const double re = std::cos(phase), im = std::sin(phase);
        double y = re - c_re, t = sum_re + y;
        c_re = (t - sum_re) - y;
        sum_re = t;
        y = im - c_im;
        t = sum_im + y;
        c_im = (t - sum_im) - y;
        sum_im = t;
    }
    const double n = static_cast<double>(paths.size());
    return {sum_re / n, sum_im / n};
}

} // namespace occstab

#endif // OCCSTAB_STABLE_SIM_HPP
