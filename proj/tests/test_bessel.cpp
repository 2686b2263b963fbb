#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ratchet/bessel.hpp"
#include "test_support.hpp"

using ratchet::bessel_J;
using testsupport::bessel_series;

TEST_CASE("special values", "[bessel]") {
    REQUIRE(bessel_J(0, 0.0) == 1.0);
    for (int m = 1; m < 12; ++m) {
        REQUIRE(bessel_J(m, 0.0) == 0.0);
        REQUIRE(bessel_J(-m, 0.0) == 0.0);
    }
}

TEST_CASE("downward recurrence agrees with the defining series", "[bessel]") {
    for (double z : {0.15, 0.5, 1.5, 3.0, 7.25}) {
        for (int m = 0; m <= 30; ++m) {
            const double want = bessel_series(m, z);
            const double got = bessel_J(m, z);
            REQUIRE(std::fabs(got - want) <=
                    1e-12 * std::max(1e-2, std::fabs(want)));
        }
    }
}

TEST_CASE("reflection identities", "[bessel]") {
    for (double z : {0.4, 2.3}) {
        for (int m = 0; m <= 8; ++m) {
            const double ref = bessel_J(m, z);
            REQUIRE(bessel_J(-m, z) == Catch::Approx((m % 2 ? -1.0 : 1.0) * ref).margin(1e-15));
            REQUIRE(bessel_J(m, -z) == Catch::Approx((m % 2 ? -1.0 : 1.0) * ref).margin(1e-15));
        }
    }
}

TEST_CASE("completeness sum", "[bessel]") {
    for (double z : {0.5, 1.5, 3.0}) {
        double sum = bessel_J(0, z) * bessel_J(0, z);
        for (int m = 1; m <= 60; ++m) sum += 2.0 * bessel_J(m, z) * bessel_J(m, z);
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("domain guard", "[bessel]") {
    REQUIRE_THROWS_AS(bessel_J(0, 2e4), std::invalid_argument);
}

TEST_CASE("kick bandwidth bounds the spectral tail", "[bessel]") {
    REQUIRE(ratchet::kick_bandwidth(0.0, 1e-14) == 0);
    for (double z : {0.15, 0.5, 1.5, 3.0}) {
        const double tol = 1e-14;
        const int b = ratchet::kick_bandwidth(z, tol);
        const auto tail_beyond = [&](int bound) {
            double acc = bessel_series(0, z) * bessel_series(0, z);
            for (int m = 1; m <= bound; ++m)
                acc += 2.0 * bessel_series(m, z) * bessel_series(m, z);
            return 1.0 - acc;
        };
        REQUIRE(tail_beyond(b) < 0.25 * tol);
        REQUIRE(tail_beyond(b - 1) >= 0.25 * tol);
    }
}
