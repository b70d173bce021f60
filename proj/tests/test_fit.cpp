/// @file test_fit.cpp
/// @brief Least-squares fits, dyadic grids, the RNG and parallel_for.

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include "kinreg/errors.hpp"
#include "kinreg/fit.hpp"
#include "kinreg/parallel.hpp"
#include "kinreg/rng.hpp"

using namespace kinreg;

TEST_CASE("fit_line recovers an exact line") {
    const auto f = fit_line({{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}, {3.0, 7.0}});
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.samples.size() == 4);
}

TEST_CASE("fit_line matches the normal equations on noisy data") {
    const std::vector<std::pair<double, double>> s{{0, 0.1}, {1, 0.9}, {2, 2.2}, {3, 2.8}, {4, 4.1}};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : s) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = 5.0;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const auto f = fit_line(s);
    CHECK(f.slope == doctest::Approx(slope).epsilon(1e-13));
    CHECK(f.intercept == doctest::Approx((sy - slope * sx) / n).epsilon(1e-13));
    CHECK(f.r_squared < 1.0);
    CHECK(f.r_squared > 0.95);
}

TEST_CASE("fit_line rejects degenerate input") {
    CHECK_THROWS_AS(fit_line({{1.0, 2.0}}), ComputationError);
    CHECK_THROWS_AS(fit_line({{1.0, 2.0}, {1.0, 3.0}}), ComputationError);
}

TEST_CASE("fit_power_law finds the exponent of x^1.5") {
    std::vector<double> x, y;
    for (int k = 0; k < 6; ++k) {
        x.push_back(std::ldexp(1.0, -k));
        y.push_back(3.0 * std::pow(x.back(), 1.5));
    }
    const auto f = fit_power_law(x, y);
    CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    y[2] = 0.0;
    CHECK_THROWS_AS(fit_power_law(x, y), ComputationError);
}

TEST_CASE("dyadic_grid is descending powers of two") {
    const auto g = dyadic_grid(2, 5);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == 0.25);
    CHECK(g.back() == 1.0 / 32.0);
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] == g[k - 1] / 2);
}

TEST_CASE("SplitMix64 reference stream") {
    // First outputs for seed 0 of the published algorithm.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("SplitMix64 uniform draws stay in range and reproduce") {
    SplitMix64 a(42), b(42);
    for (int k = 0; k < 1000; ++k) {
        const double u = a.uniform(-2.0, 3.0);
        CHECK(u >= -2.0);
        CHECK(u < 3.0);
        CHECK(u == b.uniform(-2.0, 3.0));
    }
    SplitMix64 parent(7);
    auto child = parent.split();
    CHECK(child.next() != parent.next());
}

TEST_CASE("parallel_for visits each index once") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
}
