#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mdiqkd/bessel.hpp"
#include "oracle.hpp"

using mdiqkd::bessel_i0;

TEST_CASE("i0 at zero is one") { CHECK(bessel_i0(0.0) == 1.0); }

TEST_CASE("i0 matches the power-series reference values") {
    // Frozen from 30-digit evaluation of the defining series.
    CHECK(bessel_i0(1.0) == doctest::Approx(1.26606587775200833560).epsilon(1e-14));
    CHECK(bessel_i0(2.0) == doctest::Approx(2.27958530233606726744).epsilon(1e-14));
}

TEST_CASE("i0 is even in z") {
    for (double z : {0.3, 1.7, 5.0, 12.5, 29.0}) {
        CHECK(bessel_i0(-z) == bessel_i0(z));
    }
}

TEST_CASE("i0 rejects non-finite input") {
    CHECK_THROWS_AS(bessel_i0(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(bessel_i0(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("i0 agrees with the quadrature identity across the support") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> z(0.0, 30.0);
    for (int i = 0; i < 500; ++i) {
        const double zi = z(rng);
        const double series = bessel_i0(zi);
        const double quad = mdiqkd::oracle::i0_by_quadrature(zi);
        CHECK(std::abs(series - quad) <= 1e-9 * quad);
    }
}
