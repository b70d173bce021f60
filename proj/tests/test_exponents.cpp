/// @file test_exponents.cpp
/// @brief Closed-form exponents against hand-evaluated rationals.

#include <doctest.h>

#include <cmath>

#include "kinreg/errors.hpp"
#include "kinreg/exponents.hpp"

using namespace kinreg;

namespace {

constexpr double exact = 1e-14;

/// Independent evaluation of the entropy-solution exponents.
struct Reference {
    double s_star, r;
};

/// e2_weight scales the tau/beta term of E2; 2 is the correct value.
Reference reference_scl(double a, double b, double k, double t, double e2_weight = 2.0) {
    const double ta = a / (a + 2), tb = b / (b + 2);
    const double e1 = std::min(k + 1, 1 / a) * ta;
    const double e2 = std::max({e2_weight * t / b - k - 1, (t - 1) / b, 0.0}) * tb;
    const double eta = e2 == 0 ? 1.0 : e1 / (e1 + e2);
    const double inv_ra = (1 + ta) / 2, inv_rb = (1 + tb) / 2;
    return {(1 - eta) * ta + eta * tb, 1 / ((1 - eta) * inv_ra + eta * inv_rb)};
}

}  // namespace

TEST_CASE("averaging exponents, hand-evaluated row") {
    const auto in = AveragingInputs::make(0.5, 1, 1, 1, 1, 0, 2, 2, 2);
    const auto e = averaging_exponents(in);
    CHECK(e.theta_alpha == doctest::Approx(1.0 / 8).epsilon(exact));
    CHECK(e.theta_beta == doctest::Approx(1.0 / 4).epsilon(exact));
    CHECK(e.e1 == doctest::Approx(1.0 / 4).epsilon(exact));
    CHECK(e.e2 == 0.0);
    CHECK(e.eta == 1.0);
    CHECK(e.s_star == doctest::Approx(1.0 / 4).epsilon(exact));
    CHECK(e.r == doctest::Approx(2.0).epsilon(exact));
}

TEST_CASE("averaging exponents with q = 1 and pbar near 1 approach 1/3") {
    const auto in = AveragingInputs::make(0.5, 1, 1, 1, 1, 0, 2, 1, 1.000001);
    CHECK(std::abs(averaging_exponents(in).s_star - 1.0 / 3.0) <= 1e-5);
}

TEST_CASE("alpha = beta with kappa = tau = 0 collapses both regimes") {
    const auto e = averaging_exponents(AveragingInputs::make(0.7, 0.7, 0, 0, 1, 0.2, 1.5, 1.2, 2.5));
    CHECK(e.e2 == 0.0);
    CHECK(e.s_star == doctest::Approx(e.theta_beta).epsilon(exact));
    CHECK(e.theta_alpha == doctest::Approx(e.theta_beta).epsilon(exact));
}

TEST_CASE("averaging input ranges are enforced") {
    CHECK_THROWS_AS(AveragingInputs::make(0.9, 0.5, 0, 0, 1, 0, 2, 2, 2), std::invalid_argument);  // alpha > beta
    CHECK_THROWS_AS(AveragingInputs::make(0.5, 1, -1, 0, 1, 0, 2, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(AveragingInputs::make(0.5, 1, 0, 0, 1.5, 0, 2, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(AveragingInputs::make(0.5, 1, 0, 0, 1, 1, 2, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(AveragingInputs::make(0.5, 1, 0, 0, 1, 0, 1.5, 2, 2), std::invalid_argument);  // q > p
    CHECK_THROWS_AS(AveragingInputs::make(0.5, 1, 0, 0, 1, 0, 2, 2, 3), std::invalid_argument);    // pbar > p'
    CHECK_THROWS_AS(AveragingInputs::make(0.5, 1, 0, 0, 1, 0, 2, 2, 1), std::invalid_argument);    // pbar = 1
    CHECK(AveragingInputs::make(0.5, 1, 0, 0, 1, 0.5, 2, 2, 2).pbar_admissible());
    CHECK_FALSE(AveragingInputs::make(0.5, 1, 0, 0, 1, 0, 2, 2, 1.5).pbar_admissible());
}

TEST_CASE("degenerate small-velocity gain is reported") {
    // gamma = 0, alpha = 1: E1 = min(kappa, 0) * theta = 0.
    CHECK_THROWS_AS(averaging_exponents(AveragingInputs::make(1, 1, 0, 0, 0, 0, 2, 2, 2)), ComputationError);
}

TEST_CASE("entropy-solution exponents, sine profile") {
    const auto e = scl_exponents(0.5, 1, 1, 1);
    CHECK(e.s_star == doctest::Approx(1.0 / 3.0).epsilon(exact));
    CHECK(e.r == doctest::Approx(1.5).epsilon(exact));
}

TEST_CASE("entropy-solution exponents, ell = 3 row") {
    const auto e = scl_exponents(1.0 / 3.0, 1, 2, 2);
    CHECK(e.theta_alpha == doctest::Approx(1.0 / 7).epsilon(exact));
    CHECK(e.theta_beta == doctest::Approx(1.0 / 3).epsilon(exact));
    CHECK(e.e1 == doctest::Approx(3.0 / 7).epsilon(exact));
    CHECK(e.e2 == doctest::Approx(1.0 / 3).epsilon(exact));
    CHECK(e.eta == doctest::Approx(9.0 / 16).epsilon(exact));
    CHECK(e.s_star == doctest::Approx(0.25).epsilon(exact));
    CHECK(e.r == doctest::Approx(8.0 / 5).epsilon(exact));
}

TEST_CASE("entropy-solution exponents, ell = 1 row") {
    const auto e = scl_exponents(1, 1, 0, 0);
    CHECK(e.e2 == 0.0);
    CHECK(e.eta == 1.0);
    CHECK(e.s_star == doctest::Approx(1.0 / 3.0).epsilon(exact));
}

TEST_CASE("entropy-solution exponents match an independent evaluation") {
    for (double a : {0.1, 0.25, 0.5, 0.8, 1.0}) {
        for (double k : {0.0, 0.5, 1.0, 3.0}) {
            for (double t : {0.0, 0.7, 1.0, 2.5}) {
                const auto e = scl_exponents(a, 1.0, k, t);
                const auto ref = reference_scl(a, 1.0, k, t);
                CHECK(e.s_star == doctest::Approx(ref.s_star).epsilon(1e-13));
                CHECK(e.r == doctest::Approx(ref.r).epsilon(1e-13));
                CHECK(e.s_star >= e.theta_alpha - 1e-15);
                CHECK(e.s_star <= e.theta_beta + 1e-15);
                if (a < 1.0) CHECK((e.e2 == 0.0) == (std::abs(e.s_star - e.theta_beta) < 1e-15));
            }
        }
    }
    CHECK_THROWS_AS(scl_exponents(0.0, 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(scl_exponents(0.5, 1, -1, 0), std::invalid_argument);
}

TEST_CASE("model-flux exponent table") {
    CHECK(model_flux_exponent(1) == doctest::Approx(1.0 / 3));
    CHECK(model_flux_exponent(2) == doctest::Approx(1.0 / 3));
    CHECK(model_flux_exponent(5) == doctest::Approx(1.0 / 6));
    for (double ell : {1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 8.0}) {
        INFO("ell = " << ell);
        CHECK(std::abs(scl_exponents(1 / ell, 1, ell - 1, ell - 1).s_star - model_flux_exponent(ell)) <= 1e-12);
    }
}

TEST_CASE("theta increases with the exponent") {
    double prev = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double a = k / 100.0;
        const double th = averaging_exponents(AveragingInputs::make(a, 1, 0, 0, 1, 0.25, 1.8, 1.3, 1.9)).theta_alpha;
        CHECK(th > prev);
        prev = th;
    }
}

TEST_CASE("averaging exponents converge to the entropy-solution limit") {
    const double profiles[4][4] = {{1, 1, 0, 0}, {0.5, 1, 1, 1}, {1.0 / 3, 1, 2, 2}, {0.5, 1, 1, 1}};
    for (const auto& p : profiles) {
        const auto limit = scl_exponents(p[0], p[1], p[2], p[3]);
        double prev = INFINITY;
        for (double eps : {1e-2, 1e-4, 1e-6}) {
            const auto a = averaging_exponents(
                AveragingInputs::make(p[0], p[1], p[2], p[3], 1 - eps, 0.5 - eps, 2, 1, 1 + eps));
            const double err = std::max(std::abs(a.s_star - limit.s_star), std::abs(a.r - limit.r));
            CHECK(err <= 10 * eps);
            CHECK(err < prev);
            prev = err;
        }
    }
}

TEST_CASE("LPT baseline") {
    const auto b = lpt_baseline(0.5, 2, 2);
    CHECK(b.theta == doctest::Approx(1.0 / 8).epsilon(exact));
    CHECK(b.r == doctest::Approx(2.0).epsilon(exact));
    const auto c = lpt_baseline(1, 1.5, 1.5);
    CHECK(c.theta == doctest::Approx((1 - 1 / 1.5) / 2).epsilon(exact));
    CHECK(c.r == doctest::Approx(1.5).epsilon(exact));
    // Entropy-solution endpoint: s = 1/(1 + 2 ell) for alpha = 1/ell.
    for (int ell = 1; ell <= 5; ++ell) CHECK(lpt_scl_exponent(1.0 / ell) == doctest::Approx(1.0 / (1 + 2 * ell)));
    CHECK(lpt_scl_exponent(0.5) == doctest::Approx(0.2).epsilon(exact));
    CHECK(lpt_scl_exponent(0.5) < scl_exponents(0.5, 1, 1, 1).s_star);
    CHECK_THROWS_AS(lpt_baseline(0.5, 1, 1), std::invalid_argument);
}

TEST_CASE("Tadmor-Tao baseline") {
    CHECK(tadmor_tao_baseline(0.5, 0, 2, 2) == doctest::Approx(lpt_baseline(0.5, 2, 2).theta).epsilon(exact));
    CHECK(tadmor_tao_baseline(0.7, 0, 1.6, 1.2) == doctest::Approx(lpt_baseline(0.7, 1.6, 1.2).theta).epsilon(exact));
    CHECK(tadmor_tao_baseline(0.5, 1, 2, 2) == doctest::Approx(0.25).epsilon(exact));
    CHECK(tadmor_tao_baseline(0.5, 0.5, 2, 2) == doctest::Approx(1.0 / 6).epsilon(exact));
    CHECK(tadmor_tao_baseline(0.5, 1, 2, 2) > lpt_baseline(0.5, 2, 2).theta);
}

TEST_CASE("a corrupted E2 formula is caught by the sine profile row") {
    // Mutation check: weighting tau/beta by 3 instead of 2 makes E2 > 0 for
    // the sine profile, which moves s* off 1/3 by far more than 1e-12.
    const auto good = reference_scl(0.5, 1, 1, 1);
    const auto bad = reference_scl(0.5, 1, 1, 1, 3.0);
    CHECK(std::abs(good.s_star - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(bad.s_star - 1.0 / 3.0) > 1e-3);
    CHECK(std::abs(scl_exponents(0.5, 1, 1, 1).s_star - bad.s_star) > 1e-3);
}
