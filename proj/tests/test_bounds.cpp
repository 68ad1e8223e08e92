#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "doctest.h"
#include "reference_bounds.hpp"
#include "rvfl/bounds.hpp"
#include "rvfl/rng.hpp"
#include "rvfl/specfun.hpp"
#include "test_support.hpp"

using namespace rvfl;
using testsup::kPi;

namespace {

// 12 significant digits of n itself: |delta ln n| <= 5e-13.
void check_against_reference(int m, double eps, double eta, double ell, double R, double dK) {
    const double main_d = n_main_log10(m, eps, eta, ell, R, dK);
    const double approx_d = n_approx_log10(m, eps, eta, ell, R, dK);
    const double main_ref =
        static_cast<double>(refbounds::n_main_log10_50(m, eps, eta, ell, R, dK));
    const double approx_ref =
        static_cast<double>(refbounds::n_approx_log10_50(m, eps, eta, ell, R, dK));
    CHECK(std::abs(main_d - main_ref) * std::log(10.0) < 5e-13);
    CHECK(std::abs(approx_d - approx_ref) * std::log(10.0) < 5e-13);
}

}  // namespace

TEST_CASE("schedule splits the budget into exact rationals") {
    for (int m : {1, 2, 3, 7, 20}) {
        const ParameterSchedule s = schedule(m, 0.3, 1.5, 0.8, 1.0);
        const double D = double(m) * m + 3.0 * m + 1.0;
        CHECK(s.alpha == doctest::Approx(m * (m + 2.0) / D).epsilon(1e-15));
        CHECK(s.beta == doctest::Approx(1.0 / D).epsilon(1e-15));
        CHECK(s.gamma == doctest::Approx(m / D).epsilon(1e-15));
        CHECK(s.alpha + s.beta + s.gamma == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(s.c_a ==
              doctest::Approx(2.0 + std::cbrt(2.0) * 2.3381074104597670 *
                                        std::pow(double(m), -2.0 / 3.0))
                  .epsilon(1e-13));
    }
    for (long long m : {100LL, 10000LL, 1000000LL}) {
        const ParameterSchedule s = schedule(int(m), 0.5, 1.0, 1.0, 1.0);
        CHECK(s.alpha + s.beta + s.gamma == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frequency scale matches the frozen canonical value") {
    const ParameterSchedule s = schedule(1, 0.1, 1.0, 1.0, 1.0);
    CHECK(s.Lambda == doctest::Approx(82.43051238922422).epsilon(1e-13));
    CHECK(s.lambda == doctest::Approx(s.sigma * s.Lambda).epsilon(1e-15));
    // lambda = sigma Lambda is independent of sigma
    const ParameterSchedule s2 = schedule(1, 0.1, 1.0, 1.0, 2.0);
    CHECK(s2.lambda == doctest::Approx(s.lambda).epsilon(1e-14));
    CHECK(s2.Lambda == doctest::Approx(s.Lambda / 2.0).epsilon(1e-14));
    CHECK(s2.theta == doctest::Approx(s.theta).epsilon(1e-14));
}

TEST_CASE("schedule turns the lemma bounds into exact budget slices") {
    for (int m : {1, 2, 3, 5, 9}) {
        for (double eps : {0.05, 0.3, 0.8}) {
            const ParameterSchedule s = schedule(m, eps, 2.0, 1.3, 1.0);
            CHECK(lemma2_bound(m, 2.0, s.lambda) ==
                  doctest::Approx(s.alpha * eps).epsilon(1e-10));
            CHECK(lemma3_bound(m, 2.0, 1.3, s.theta, s.lambda) ==
                  doctest::Approx(s.beta * eps).epsilon(1e-10));
        }
    }
}

TEST_CASE("log form of the truncation bound matches the direct form") {
    for (int m : {1, 2, 4}) {
        const ParameterSchedule s = schedule(m, 0.4, 1.0, 1.0, 1.0);
        const double direct = lemma3_bound(m, 1.0, 1.0, s.theta, s.lambda);
        const double logged = log_lemma3_bound(m, 1.0, 1.0, s.theta, s.lambda);
        CHECK(std::log(direct) == doctest::Approx(logged).epsilon(1e-10));
    }
}

TEST_CASE("width formulas reproduce the frozen 40-digit values") {
    struct Case {
        int m;
        double eps, eta, ell, R, dK, main_log10, approx_log10;
    };
    const Case cases[] = {
        {1, 0.1, 0.05, 1.0, 1.0, 1.0, 22.69962199423749279, 14.83190498908843871},
        {2, 0.25, 0.1, 1.0, 1.0, 1.5, 19.75774923319576268, 15.33511997695509795},
        {3, 0.5, 0.01, 2.0, 1.5, 2.0, 24.45704995707830102, 20.99889174279346530},
    };
    for (const auto& c : cases) {
        CHECK(n_main_log10(c.m, c.eps, c.eta, c.ell, c.R, c.dK) ==
              doctest::Approx(c.main_log10).epsilon(1e-13));
        CHECK(n_approx_log10(c.m, c.eps, c.eta, c.ell, c.R, c.dK) ==
              doctest::Approx(c.approx_log10).epsilon(1e-13));
    }
}

TEST_CASE("width formulas agree with the 50-digit reference on random tuples") {
    Rng rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + int(rng.uniform01() * 10);
        const double eps = rng.uniform(0.05, 0.95);
        const double eta = rng.uniform(0.01, 0.5);
        const double ell = rng.uniform(0.5, 4.0);
        const double R = rng.uniform(0.5, 3.0);
        const double dK = rng.uniform(1.0, double(m));
        check_against_reference(m, eps, eta, ell, R, dK);
    }
    for (const auto& frozen : {std::tuple{1, 0.1, 0.05, 1.0, 1.0, 1.0},
                               std::tuple{3, 0.5, 0.01, 2.0, 1.5, 2.0}})
        std::apply(check_against_reference, frozen);
}

TEST_CASE("widths respond monotonically to accuracy and confidence") {
    // tighter epsilon costs width
    CHECK(n_main_log10(2, 0.05, 0.1, 1, 1, 1) > n_main_log10(2, 0.1, 0.1, 1, 1, 1));
    CHECK(n_main_log10(2, 0.1, 0.1, 1, 1, 1) > n_main_log10(2, 0.4, 0.1, 1, 1, 1));
    // easier confidence saves width
    CHECK(n_main_log10(2, 0.1, 0.3, 1, 1, 1) < n_main_log10(2, 0.1, 0.05, 1, 1, 1));
    CHECK(n_approx_log10(2, 0.1, 0.3, 1, 1, 1) < n_approx_log10(2, 0.1, 0.05, 1, 1, 1));
}

TEST_CASE("preconditions reject out-of-range confidence and dimension inputs") {
    CHECK_THROWS_AS(n_main_log10(2, 0.1, 2.0, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(n_main_log10(2, 0.1, 0.0, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(n_main_log10(2, 0.1, 0.1, 1, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(n_main_log10(2, 0.1, 0.1, 1, 1, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(n_main_log10(0, 0.1, 0.1, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(schedule(1, -0.1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("doubling ell R shifts the approximate width by a clean power of two") {
    for (int m : {1, 2, 5}) {
        const double base = n_approx_log10(m, 0.2, 0.1, 1.0, 1.0, 1.0);
        const double doubled = n_approx_log10(m, 0.2, 0.1, 2.0, 1.0, 1.0);
        CHECK(doubled - base ==
              doctest::Approx((2.0 * m + 6.0) * std::log10(2.0)).epsilon(1e-12));
        // doubling R instead of ell does the same through the product ell R
        const double doubled_R = n_approx_log10(m, 0.2, 0.1, 1.0, 2.0, 1.0);
        CHECK(doubled_R == doctest::Approx(doubled).epsilon(1e-14));
    }
}

TEST_CASE("the main width is only polylog-factors above the simplified one") {
    double prev_ratio = 1e9;
    for (int m : {20, 50, 100}) {
        const double main_lg = n_main_log10(m, 0.5, 0.1, 1.0, 1.0, 1.0);
        const double approx_lg = n_approx_log10(m, 0.5, 0.1, 1.0, 1.0, 1.0);
        const double excess = main_lg - approx_lg;
        CHECK(excess > 0.0);
        const double ratio = excess / main_lg;
        CHECK(ratio < 0.15);
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("large-m diagnostics approach their asymptotic simplifications") {
    const ParameterSchedule s100 = schedule(100, 0.5, 1.0, 1.0, 1.0);
    const ThetaRegime t100 = theta_regime_report(s100);
    CHECK(t100.inv_theta == doctest::Approx(1.0 / s100.theta).epsilon(1e-12));
    CHECK(t100.large_m_approx ==
          doctest::Approx(2.0 * 1.0 * 1.0 * std::exp(1.0) / 0.5).epsilon(1e-12));
    CHECK(t100.ratio > 0.5);
    CHECK(t100.ratio < 2.0);
    const ThetaRegime t200 = theta_regime_report(schedule(200, 0.5, 1.0, 1.0, 1.0));
    CHECK(t200.stirling_ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("plugging the main width into its own tail clears the confidence level") {
    Rng rng(909);
    for (int trial = 0; trial < 8; ++trial) {
        const int m = 1 + int(rng.uniform01() * 10);
        const double eps = rng.uniform(0.05, 0.9);
        const double eta = rng.uniform(0.01, 0.5);
        const double ell = rng.uniform(0.5, 3.0);
        const double R = rng.uniform(0.5, 2.0);
        const double dK = rng.uniform(1.0, double(m));
        const double tail = log_main_tail(m, eps, eta, ell, R, dK);
        CHECK(tail <= std::log(eta) + 1e-6 * std::abs(std::log(eta)));
    }
}

TEST_CASE("integer width is returned exactly when it fits") {
    const auto small = n_main_integer(1, 0.9, 0.5, 0.5, 0.5, 1.0);
    REQUIRE(small.has_value());
    const double lg = n_main_log10(1, 0.9, 0.5, 0.5, 0.5, 1.0);
    REQUIRE(lg < 18.9);
    const double n_float = std::pow(10.0, lg);
    CHECK(double(*small) >= n_float * (1.0 - 1e-12));
    CHECK(double(*small) <= n_float * (1.0 + 1e-12) + 1.0);
    CHECK_FALSE(n_main_integer(1, 0.1, 0.05, 1.0, 1.0, 1.0).has_value());
    CHECK_FALSE(n_main_integer(3, 0.5, 0.01, 2.0, 1.5, 2.0).has_value());
}

TEST_CASE("closed-form concentration scale matches its definition") {
    const ParameterSchedule s = schedule(2, 0.3, 1.25, 0.8, 1.0);
    const int m = 2;
    const double ell = 1.25, R = 0.8, dK = 1.5;
    // B = 2 R^2 sqrt(m) (2pi)^{-m/2} lambda^{m+1} (1 + 1/theta) ell V_m R^m 2^{dK}
    const double expected = std::log(2.0) + 2.0 * std::log(R) + 0.5 * std::log(double(m)) -
                            (m / 2.0) * std::log(2.0 * kPi) + (m + 1.0) * std::log(s.lambda) +
                            std::log1p(1.0 / s.theta) + std::log(ell) +
                            std::log(specfun::unit_ball_volume(m)) + m * std::log(R) +
                            dK * std::log(2.0);
    CHECK(log_hoeffding_b_closed_form(m, ell, R, s.lambda, s.theta, dK) ==
          doctest::Approx(expected).epsilon(1e-10));
}
