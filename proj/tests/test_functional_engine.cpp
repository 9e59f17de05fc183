#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "occstab/analytic_constants.hpp"
#include "occstab/functional_engine.hpp"
#include "occstab/stats.hpp"

using namespace occstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> ensemble_first_law(int n, double t, const TestFunction& f, std::size_t paths,
                                       std::uint64_t seed, const SimParams& p = {}) {
    std::vector<double> out(paths);
    for (std::size_t k = 0; k < paths; ++k)
        out[k] = first_law_sample(n, t, f, seed, p, k).value;
    return out;
}

} // namespace

TEST_CASE("occupation integral: zero function and constant path") {
    StablePath path;
    path.alpha = 1.0;
    path.grid.points = {0.0, 0.5, 1.0, 1.5, 2.0};
    path.values = {0.0, 0.0, 0.0, 0.0, 0.0};

    REQUIRE(occupation_integral(path, test_functions::zero(), 0.0, 2.0) == 0.0);
    // f(0) = 1 along a path pinned at the origin integrates the interval length
    REQUIRE_THAT(occupation_integral(path, test_functions::gauss(), 0.0, 2.0),
                 WithinRel(2.0, 1e-14));
    REQUIRE_THAT(occupation_integral(path, test_functions::gauss(), 0.25, 1.25),
                 WithinRel(1.0, 1e-14));
}

TEST_CASE("occupation integral: linearity and additivity are exact") {
    const SimParams p;
    StablePath path = simulate_hybrid_path(StabilityIndex(1.0), 50.0, 9.5, p, 555, 0);
    const TestFunction f = test_functions::gauss();
    const TestFunction g = test_functions::gauss_deriv();

    TestFunction combo;
    combo.id = "combo";
    combo.eval = [&](double x) { return 2.0 * f.eval(x) - 3.0 * g.eval(x); };
    combo.support_radius = 8.0;
    combo.integral_f = 2.0 * f.integral_f;
    combo.abs_first_moment = 1.0;

    const double lhs = occupation_integral(path, combo, 0.0, 50.0);
    const double rhs = 2.0 * occupation_integral(path, f, 0.0, 50.0) -
                       3.0 * occupation_integral(path, g, 0.0, 50.0);
    REQUIRE_THAT(lhs, WithinRel(rhs, 1e-12));

    // additivity at an interior grid point
    const double mid = path.grid.points[path.grid.points.size() / 2];
    const double whole = occupation_integral(path, f, 0.0, 50.0);
    const double split = occupation_integral(path, f, 0.0, mid) +
                         occupation_integral(path, f, mid, 50.0);
    REQUIRE_THAT(whole, WithinRel(split, 1e-12));

    REQUIRE_THROWS_AS(occupation_integral(path, f, -1.0, 10.0), ParameterError);
    REQUIRE_THROWS_AS(occupation_integral(path, f, 10.0, 10.0), ParameterError);
}

TEST_CASE("hybrid grid honors its declared step bounds") {
    SimParams p;
    p.fine_step = 0.05;
    StablePath path = simulate_hybrid_path(StabilityIndex(1.0), 2000.0, 9.5, p, 808, 3);
    double max_step = 0.0;
    for (std::size_t i = 1; i < path.grid.points.size(); ++i) {
        const double dt = path.grid.points[i] - path.grid.points[i - 1];
        REQUIRE(dt > 0.0);
        max_step = std::max(max_step, dt);
        // fine mode wherever the path sits inside the switch zone
        if (std::abs(path.values[i - 1]) <= 9.5) REQUIRE(dt <= p.fine_step + 1e-12);
    }
    REQUIRE(max_step <= path.grid.max_step + 1e-9);
}

TEST_CASE("normalization consistency: sample value times n equals the raw integral") {
    SimParams p;
    const int n = 3;
    const double t = 1.0;
    const TestFunction f = test_functions::gauss();
    const auto sample = first_law_sample(n, t, f, 777, p, 5);

    // regenerate the identical trajectory and integrate it directly
    StablePath path = simulate_hybrid_path(StabilityIndex(1.0), std::exp(n * t),
                                           p.resolved_radius(f), p, 777, 5);
    const double raw = occupation_integral(path, f, 0.0, std::exp(n * t));
    REQUIRE_THAT(sample.value * n, WithinRel(raw, 1e-12));
}

TEST_CASE("functional sample preconditions") {
    const TestFunction f = test_functions::gauss();
    REQUIRE_THROWS_AS(first_law_sample(0, 1.0, f, 1), ParameterError);
    REQUIRE_THROWS_AS(second_law_sample(5, 1.0, f, 1), ParameterError); // not mean zero
    REQUIRE_THROWS_AS(rosen_sample(1.0, 100, 1.0, test_functions::dog(), 1), ParameterError);
    REQUIRE_THROWS_AS(rosen_sample(1.5, 100, 1.0, f, 1), ParameterError);
    REQUIRE_THROWS_AS(logn_sample(2, 1.0, f, 1), ParameterError);

    TestFunction bad = f;
    bad.abs_first_moment = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(first_law_sample(5, 1.0, bad, 1), ParameterError);
}

TEST_CASE("zero test function gives identically zero samples") {
    REQUIRE(first_law_sample(5, 1.0, test_functions::zero(), 3).value == 0.0);
    REQUIRE(second_law_sample(5, 1.0, test_functions::zero(), 3).value == 0.0);
    REQUIRE(logn_sample(10, 1.0, test_functions::zero(), 3).value == 0.0);
    REQUIRE(rosen_sample(1.5, 10, 1.0, test_functions::zero(), 3).value == 0.0);
}

TEST_CASE("first-law ensemble mean approaches K1 t") {
    const TestFunction f = test_functions::gauss();
    const double target = k1(f).value; // t = 1
    auto xs = ensemble_first_law(8, 1.0, f, 800, 0xA11CE, {});
    const double mean = sample_mean(xs);
    const double se = sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
    REQUIRE_THAT(mean, WithinAbs(target, 0.15 * target + 3.0 * se));
}

TEST_CASE("refinement: halving the fine step moves the ensemble mean by little") {
    const TestFunction f = test_functions::gauss();
    const int n = 5;
    const std::size_t N = 6000;
    SimParams coarse;
    coarse.fine_step = 0.05;
    SimParams fine;
    fine.fine_step = 0.025;
    auto xs_c = ensemble_first_law(n, 1.0, f, N, 0xBEEF, coarse);
    auto xs_f = ensemble_first_law(n, 1.0, f, N, 0xFEED, fine);
    const double mc = sample_mean(xs_c), mf = sample_mean(xs_f);
    const double se = std::hypot(sample_std(xs_c), sample_std(xs_f)) /
                      std::sqrt(static_cast<double>(N));
    // 1% relative bias budget plus the Monte Carlo noise of the comparison
    REQUIRE(std::abs(mc - mf) <= 0.01 * std::abs(mf) + 3.0 * se);
}

TEST_CASE("local time estimator: trivial and worked cases") {
    StablePath path;
    path.alpha = 2.0;
    path.grid.points = {0.0, 0.5, 1.0};
    path.values = {5.0, 6.0, 7.0};
    REQUIRE(local_time_estimate(path, 1.0, 0.05) == 0.0); // never near the origin

    StablePath cauchy = path;
    cauchy.alpha = 1.0;
    REQUIRE_THROWS_AS(local_time_estimate(cauchy, 1.0, 0.05), ParameterError);
    REQUIRE_THROWS_AS(local_time_estimate(path, 1.0, -0.1), ParameterError);
}

TEST_CASE("local time ensemble mean matches E L_t(0) for alpha = 2") {
    SimParams p;
    p.fine_step = 0.001;
    const double eps = 0.05;
    const std::size_t N = 4000;
    double acc = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        StablePath path = simulate_hybrid_path(StabilityIndex(2.0), 1.0, 3.0, p, 0xCAFE, k);
        acc += local_time_estimate(path, 1.0, eps);
    }
    const double mean = acc / static_cast<double>(N);
    REQUIRE_THAT(mean, WithinAbs(1.0 / std::sqrt(pi_v), 0.10 / std::sqrt(pi_v)));
}

TEST_CASE("local time bandwidth stability: halving epsilon moves the mean by <= 5%") {
    SimParams p;
    p.fine_step = 0.001;
    const std::size_t N = 4000;
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        StablePath path = simulate_hybrid_path(StabilityIndex(2.0), 1.0, 3.0, p, 0xD0D0, k);
        a += local_time_estimate(path, 1.0, 0.05);
        b += local_time_estimate(path, 1.0, 0.025);
    }
    REQUIRE(std::abs(a - b) / a <= 0.05);
}

TEST_CASE("variance of the high-frequency residual decays like 1/n") {
    // log-log slope of Var[(1/n) int g(X)] across an n-ladder, g the
    // spectral-tail residual of the Gaussian bump; the target slope is -1
    const TestFunction g = test_functions::gauss_highfreq();
    const std::vector<int> ns{4, 6, 8, 10};
    const std::size_t N = 3000;
    std::vector<double> raw(ns.size(), 0.0);
    std::vector<std::vector<double>> samples(ns.size(), std::vector<double>(N));
    SimParams p;
    for (std::size_t k = 0; k < N; ++k) {
        auto vals = raw_occupation_ladder(StabilityIndex(1.0), g, Normalization::first_law, ns,
                                          1.0, p, 0x5EED5, k);
        for (std::size_t j = 0; j < ns.size(); ++j) samples[j][k] = vals[j] / ns[j];
    }
    // least-squares slope of log Var vs log n
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < ns.size(); ++j) {
        const double vx = std::log(static_cast<double>(ns[j]));
        const double sd = sample_std(samples[j]);
        const double vy = std::log(sd * sd);
        sx += vx;
        sy += vy;
        sxx += vx * vx;
        sxy += vx * vy;
    }
    const double m = static_cast<double>(ns.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    REQUIRE_THAT(slope, WithinAbs(-1.0, 0.5));
}
