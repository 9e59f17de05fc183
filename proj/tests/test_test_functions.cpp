#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "occstab/analytic_constants.hpp"
#include "occstab/test_functions.hpp"

using namespace occstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("built-in transforms agree with direct quadrature") {
    for (const auto* id : {"gauss", "gauss_deriv", "dog", "hat"}) {
        TestFunction f = test_functions::by_id(id);
        TestFunction numeric = f;
        numeric.fourier = nullptr; // force the quadrature path
        for (double u : {0.0, 0.7, 1.0, 2.3}) {
            const auto a = fourier_transform(f, u);
            const auto b = fourier_transform(numeric, u);
            CAPTURE(id, u);
            REQUIRE_THAT(a.real(), WithinAbs(b.real(), 1e-8));
            REQUIRE_THAT(a.imag(), WithinAbs(b.imag(), 1e-8));
        }
    }
}

TEST_CASE("transform convention: fhat(0) equals the integral of f") {
    for (const auto* id : {"gauss", "gauss_deriv", "dog", "hat", "gauss_highfreq"}) {
        TestFunction f = test_functions::by_id(id);
        REQUIRE_THAT(fourier_transform(f, 0.0).real(), WithinAbs(f.integral_f, 1e-10));
        if (f.mean_zero) REQUIRE(std::abs(fourier_transform(f, 0.0)) <= 1e-10);
    }
}

TEST_CASE("conjugate symmetry for real f") {
    TestFunction f = test_functions::dog();
    for (double u : {0.3, 1.1, 4.0}) {
        const auto plus = fourier_transform(f, u);
        const auto minus = fourier_transform(f, -u);
        REQUIRE_THAT(minus.real(), WithinAbs(plus.real(), 1e-12));
        REQUIRE_THAT(minus.imag(), WithinAbs(-plus.imag(), 1e-12));
    }
}

TEST_CASE("gauss transform: worked values") {
    TestFunction f = test_functions::gauss();
    REQUIRE_THAT(fourier_transform(f, 0.0).real(), WithinRel(2.5066282746310002, 1e-12));
    REQUIRE_THAT(fourier_transform(f, 1.0).real(),
                 WithinAbs(std::sqrt(2.0 * pi_v) * std::exp(-0.5), 1e-8));
    TestFunction fd = test_functions::gauss_deriv();
    REQUIRE(std::abs(fourier_transform(fd, 0.0)) == 0.0);
}

TEST_CASE("support radius flags genuine decay") {
    for (const auto* id : {"gauss", "gauss_deriv", "dog"}) {
        TestFunction f = test_functions::by_id(id);
        REQUIRE(std::abs(f.eval(f.support_radius)) < 1e-12);
        REQUIRE(std::abs(f.eval(-f.support_radius)) < 1e-12);
    }
    TestFunction h = test_functions::hat();
    REQUIRE(h.eval(2.01) == 0.0);
    REQUIRE(h.eval(1.0) == 1.0);
    REQUIRE(h.eval(-1.0) == -1.0);
}

TEST_CASE("tabulated functions load and reproduce analytic constants") {
    const char* path = "tab_gauss_test.txt";
    {
        std::ofstream out(path);
        out << "# x f\n";
        const int N = 4000;
        for (int i = 0; i <= N; ++i) {
            const double x = -8.0 + 16.0 * i / N;
            out << x << " " << std::exp(-0.5 * x * x) << "\n";
        }
    }
    TestFunction f = test_functions::from_table(path);
    REQUIRE_THAT(f.integral_f, WithinRel(std::sqrt(2.0 * pi_v), 1e-4));
    REQUIRE_THAT(f.eval(0.5), WithinAbs(std::exp(-0.125), 1e-5));
    REQUIRE(f.compact_support);
    REQUIRE_FALSE(f.mean_zero);
    const auto ft = fourier_transform(f, 1.0);
    REQUIRE_THAT(ft.real(), WithinAbs(std::sqrt(2.0 * pi_v) * std::exp(-0.5), 1e-3));
    std::remove(path);
}

TEST_CASE("tabulated loader rejects malformed input") {
    const char* path = "tab_bad_test.txt";
    {
        std::ofstream out(path);
        out << "0.0 1.0\n0.5 1.0\n1.7 1.0\n"; // non-uniform grid
    }
    REQUIRE_THROWS_AS(test_functions::from_table(path), ParameterError);
    std::remove(path);
    REQUIRE_THROWS_AS(test_functions::from_table("no_such_file.txt"), ParameterError);
    REQUIRE_THROWS_AS(test_functions::by_id("nope"), ParameterError);
}
