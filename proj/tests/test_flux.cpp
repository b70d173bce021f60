/// @file test_flux.cpp
/// @brief Flux evaluators, critical points and degeneracy sets.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kinreg/errors.hpp"
#include "kinreg/flux.hpp"
#include "kinreg/rng.hpp"

using namespace kinreg;
using std::numbers::pi;

TEST_CASE("flux values") {
    CHECK(eval_flux(Flux::power_abs(1), 2.0) == doctest::Approx(4.0));
    CHECK(eval_flux(Flux::sine(), pi / 2) == doctest::Approx(1.0));
    CHECK(eval_flux(Flux::power_signed(2), -1.0) == doctest::Approx(-1.0));
    CHECK(eval_flux(Flux::power_abs(2), -2.0) == doctest::Approx(8.0));
    CHECK(eval_flux(Flux::cosine(), 0.0) == doctest::Approx(1.0));
    CHECK(eval_flux(Flux::polynomial({1.0, 0.0, 0.5}), 2.0) == doctest::Approx(3.0));
}

TEST_CASE("velocity and its derivative") {
    CHECK(eval_velocity(Flux::power_abs(1), 0.5) == doctest::Approx(1.0));
    CHECK(eval_velocity(Flux::power_signed(2), -1.0) == doctest::Approx(3.0));
    CHECK(eval_velocity_derivative(Flux::cosine(), 0.0) == doctest::Approx(-1.0));
    CHECK(eval_velocity_derivative(Flux::sine(), pi / 2) == doctest::Approx(-1.0));
    CHECK(eval_velocity_derivative(Flux::power_abs(2), -0.5) == doctest::Approx(3.0));
    CHECK(eval_velocity_derivative(Flux::power_signed(2), -0.5) == doctest::Approx(-3.0));
}

TEST_CASE("velocity matches central differences of A on random points") {
    const Flux fluxes[] = {Flux::power_abs(1),    Flux::power_abs(2),    Flux::power_abs(1.5),
                           Flux::power_signed(1), Flux::power_signed(3), Flux::sine(),
                           Flux::cosine()};
    SplitMix64 rng(2024);
    const double h = 1e-5;
    for (const auto& f : fluxes) {
        for (int k = 0; k < 1000; ++k) {
            double v = rng.uniform(-10.0, 10.0);
            if (std::abs(v) < 1e-3) v = 1e-3;
            const double fd = (f.value(v + h) - f.value(v - h)) / (2 * h);
            const double a = f.velocity(v);
            CHECK(std::abs(fd - a) <= 1e-6 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("velocity derivative matches central differences of a") {
    const Flux fluxes[] = {Flux::power_abs(2), Flux::power_signed(3), Flux::sine(), Flux::cosine()};
    SplitMix64 rng(99);
    const double h = 1e-6;
    for (const auto& f : fluxes) {
        for (int k = 0; k < 200; ++k) {
            const double v = rng.uniform(-3.0, 3.0);
            if (std::abs(v) < 1e-2) continue;
            const double fd = (f.velocity(v + h) - f.velocity(v - h)) / (2 * h);
            CHECK(std::abs(fd - f.velocity_derivative(v)) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("power fluxes reject ell < 1") {
    CHECK_THROWS_AS(Flux::power_abs(0.5), std::invalid_argument);
    CHECK_THROWS_AS(Flux::power_signed(0.0), std::invalid_argument);
}

TEST_CASE("piecewise polynomial checks C2 matching") {
    // A = v^2/2 for v < 0, v^2/2 + v^3 for v >= 0: value, slope and curvature agree at 0.
    CHECK_NOTHROW(Flux::piecewise_polynomial({0.0}, {{{0, 0, 0.5}}, {{0, 0, 0.5, 1.0}}}));
    // Jump in A'' at 0.
    CHECK_THROWS_AS(Flux::piecewise_polynomial({0.0}, {{{0, 0, 0.5}}, {{0, 0, 1.0}}}), std::invalid_argument);
    // Jump in A at 1.
    CHECK_THROWS_AS(Flux::piecewise_polynomial({1.0}, {{{0, 1}}, {{0.5, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(Flux::piecewise_polynomial({0.0}, {{{0, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(Flux::piecewise_polynomial({1.0, 0.0}, {{{0}}, {{0}}, {{0}}}), std::invalid_argument);
}

TEST_CASE("piecewise polynomial evaluates the right piece") {
    const auto f = Flux::piecewise_polynomial({0.0}, {{{0, 0, 0.5}}, {{0, 0, 0.5, 1.0}}});
    CHECK(f.value(-2.0) == doctest::Approx(2.0));
    CHECK(f.value(1.0) == doctest::Approx(1.5));
    CHECK(f.velocity(1.0) == doctest::Approx(4.0));
    CHECK(f.velocity_derivative(1.0) == doctest::Approx(7.0));
    CHECK(f.velocity_derivative(-1.0) == doctest::Approx(1.0));
}

TEST_CASE("interval extrema include interior critical points") {
    const auto sq = Flux::power_abs(1);
    CHECK(sq.min_on(-1.0, 1.0) == doctest::Approx(0.0));
    CHECK(sq.max_on(-1.0, 1.0) == doctest::Approx(1.0));
    CHECK(Flux::sine().max_on(0.0, 3.0) == doctest::Approx(1.0));
    CHECK(Flux::sine().min_on(-3.0, 3.0) == doctest::Approx(-1.0));
    CHECK(Flux::cosine().min_on(3.0, 3.5) == doctest::Approx(-1.0));
    const auto cubic = Flux::polynomial({0, -1, 0, 1});  // v^3 - v
    CHECK(cubic.min_on(0.0, 1.0) == doctest::Approx(-2.0 / (3.0 * std::sqrt(3.0))));
    CHECK(sq.max_abs_velocity(-3.0, 1.0) == doctest::Approx(6.0));
    CHECK(Flux::sine().max_abs_velocity(-0.5, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("degeneracy sets of the builtin fluxes") {
    const auto z2 = degeneracy_set(Flux::power_abs(2), {-1.0, 1.0}, 4096);
    REQUIRE(z2.zeros.size() == 1);
    CHECK(std::abs(z2.zeros[0]) <= 1e-9);

    const auto zs = degeneracy_set(Flux::sine(), {-4.0, 4.0}, 4096);
    REQUIRE(zs.zeros.size() == 3);
    CHECK(zs.zeros[0] == doctest::Approx(-pi).epsilon(1e-10));
    CHECK(std::abs(zs.zeros[1]) <= 1e-10);
    CHECK(zs.zeros[2] == doctest::Approx(pi).epsilon(1e-10));

    const auto z1 = degeneracy_set(Flux::power_abs(1), {-1.0, 1.0}, 4096);
    CHECK(z1.empty());
    CHECK(std::isinf(z1.distance(0.3)));
    CHECK(degeneracy_set(Flux::power_signed(1), {-1.0, 1.0}, 4096).empty());
}

TEST_CASE("tangential zeros are found") {
    // a(v) = v^3/3 so a'(v) = v^2 touches zero at 0 without changing sign.
    const auto f = Flux::polynomial({0, 0, 0, 0, 1.0 / 12.0});
    const auto z = degeneracy_set(f, {-1.0, 1.0}, 1001);
    REQUIRE(z.zeros.size() == 1);
    CHECK(std::abs(z.zeros[0]) < 1e-5);
    CHECK(std::abs(f.velocity_derivative(z.zeros[0])) <= 1e-12);
}

TEST_CASE("degeneracy set is stable under doubling the scan") {
    for (const auto& f : {Flux::sine(), Flux::cosine(), Flux::power_signed(3)}) {
        const auto a = degeneracy_set(f, {-4.0, 4.0}, 1000);
        const auto b = degeneracy_set(f, {-4.0, 4.0}, 2000);
        REQUIRE(a.zeros.size() == b.zeros.size());
        for (std::size_t k = 0; k < a.zeros.size(); ++k) CHECK(std::abs(a.zeros[k] - b.zeros[k]) < 1e-6);
        for (double z : a.zeros) CHECK(std::abs(f.velocity_derivative(z)) <= 1e-12);
    }
}

TEST_CASE("too many zeros is reported") {
    DegeneracyOptions opt;
    opt.max_zeros = 4;
    CHECK_THROWS_AS(degeneracy_set(Flux::sine(), {-20.0, 20.0}, 4096, opt), ComputationError);
    CHECK_THROWS_AS(degeneracy_set(Flux::sine(), {-1.0, 1.0}, 1), std::invalid_argument);
}

TEST_CASE("distance to the degeneracy set") {
    const auto z = degeneracy_set(Flux::sine(), {-4.0, 4.0}, 4096);
    CHECK(z.distance(0.5) == doctest::Approx(0.5));
    CHECK(z.distance(3.0) == doctest::Approx(pi - 3.0));
}
