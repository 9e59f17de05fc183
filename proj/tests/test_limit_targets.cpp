#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "occstab/limit_targets.hpp"
#include "occstab/stats.hpp"

using namespace occstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("law moments: exact formulas") {
    auto expo = LimitLaw::exponential(1.0);
    REQUIRE(law_moment(expo, 1) == 1.0);
    REQUIRE(law_moment(expo, 2) == 2.0);
    REQUIRE(law_moment(expo, 4) == 24.0);

    auto mg = LimitLaw::mixed_gaussian(1.0);
    REQUIRE(law_moment(mg, 2) == 1.0);
    REQUIRE(law_moment(mg, 1) == 0.0);
    REQUIRE(law_moment(mg, 3) == 0.0);
    REQUIRE(law_moment(mg, 4) == 6.0);

    // scale enters as scale^m
    auto scaled = LimitLaw::exponential(2.0, 3.0);
    REQUIRE_THAT(law_moment(scaled, 2), WithinRel(9.0 * 2.0 * 4.0, 1e-12));

    // moment recursion M_m = m t M_{m-1} for the exponential
    auto e2 = LimitLaw::exponential(0.7);
    for (int m = 2; m <= 6; ++m)
        REQUIRE_THAT(law_moment(e2, m), WithinRel(m * e2.t * law_moment(e2, m - 1), 1e-12));
}

TEST_CASE("law cdf: worked values and shape") {
    auto expo = LimitLaw::exponential(1.0);
    REQUIRE(law_cdf(expo, -0.5) == 0.0);
    REQUIRE_THAT(law_cdf(expo, 1.0), WithinRel(1.0 - std::exp(-1.0), 1e-12));

    auto mg = LimitLaw::mixed_gaussian(1.0);
    REQUIRE(law_cdf(mg, 0.0) == 0.5);
    // monotone, limits 0 and 1
    double prev = 0.0;
    for (double x = -20.0; x <= 20.0; x += 0.25) {
        const double c = law_cdf(mg, x);
        REQUIRE(c >= prev);
        prev = c;
    }
    REQUIRE(law_cdf(mg, -40.0) < 1e-10);
    REQUIRE(law_cdf(mg, 40.0) > 1.0 - 1e-10);
}

TEST_CASE("sampler moments match the formulas at 1e6 draws") {
    const std::size_t N = 1'000'000;
    for (double t : {0.5, 1.0, 2.0}) {
        RngStream rng(99, 7);
        auto expo = LimitLaw::exponential(t);
        auto mg = LimitLaw::mixed_gaussian(t);
        std::vector<double> xe(N), xm(N);
        for (std::size_t i = 0; i < N; ++i) xe[i] = law_sample(expo, rng);
        for (std::size_t i = 0; i < N; ++i) xm[i] = law_sample(mg, rng);
        for (const auto& row : moment_table(xe, expo, 4)) {
            CAPTURE(t, row.order);
            REQUIRE(std::abs(row.z_score) <= 4.0);
        }
        for (const auto& row : moment_table(xm, mg, 4)) {
            CAPTURE(t, row.order);
            REQUIRE(std::abs(row.z_score) <= 4.0);
        }
    }
}

TEST_CASE("mixed-gaussian kurtosis ratio is 6") {
    RngStream rng(123, 0);
    auto mg = LimitLaw::mixed_gaussian(1.0);
    const std::size_t N = 1'000'000;
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double x = law_sample(mg, rng);
        m2 += x * x;
        m4 += x * x * x * x;
    }
    m2 /= N;
    m4 /= N;
    REQUIRE_THAT(m4 / (m2 * m2), WithinAbs(6.0, 0.3));
}

TEST_CASE("mixed-gaussian closed-form CDF matches the sampler") {
    RngStream rng(2024, 1);
    auto mg = LimitLaw::mixed_gaussian(1.0);
    const std::size_t N = 1'000'000;
    std::vector<double> xs(N);
    for (auto& x : xs) x = law_sample(mg, rng);
    const double d = ks_distance(xs, mg);
    REQUIRE(d <= 2.0 * 1.36 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("exponential sampler mean at t = 2") {
    RngStream rng(5, 5);
    auto expo = LimitLaw::exponential(2.0);
    const std::size_t N = 1'000'000;
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += law_sample(expo, rng);
    REQUIRE_THAT(s / N, WithinAbs(2.0, 3.0 * 2.0 / std::sqrt(static_cast<double>(N))));
}

TEST_CASE("zero scale degenerates to the constant 0") {
    RngStream rng(1, 1);
    auto law = LimitLaw::exponential(1.0, 0.0);
    for (int i = 0; i < 10; ++i) REQUIRE(law_sample(law, rng) == 0.0);
}

TEST_CASE("law characteristic functions") {
    auto expo = LimitLaw::exponential(1.0);
    REQUIRE(law_cf(expo, 0.0) == std::complex<double>(1.0, 0.0));
    auto mg = LimitLaw::mixed_gaussian(1.0);
    REQUIRE_THAT(law_cf(mg, std::sqrt(2.0)).real(), WithinRel(0.5, 1e-12));
}
