#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ratchet/fft.hpp"
#include "ratchet/observables.hpp"
#include "ratchet/state.hpp"
#include "test_support.hpp"

using ratchet::cplx;
using ratchet::MomentumState;

TEST_CASE("radix-2 FFT matches the naive DFT", "[fft]") {
    std::mt19937_64 rng{7};
    std::normal_distribution<double> gauss;
    for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
        std::vector<cplx> a(n);
        for (cplx& v : a) v = cplx{gauss(rng), gauss(rng)};
        for (int sign : {-1, +1}) {
            std::vector<cplx> got = a;
            ratchet::detail::fft_pow2(got, sign);
            const std::vector<cplx> want = testsupport::dft_naive(a, sign);
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(std::abs(got[i] - want[i]) < 1e-12 * static_cast<double>(n));
        }
    }
    std::vector<cplx> bad(6);
    REQUIRE_THROWS_AS(ratchet::detail::fft_pow2(bad, -1), std::invalid_argument);
}

TEST_CASE("uniform initial state", "[state]") {
    const MomentumState s = ratchet::uniform_initial_state();
    REQUIRE(s.size() == 1);
    REQUIRE(s.k_min() == 0);
    REQUIRE(s.amplitude_at(0) == cplx{1.0, 0.0});
    REQUIRE(ratchet::mean_momentum(s) == 0.0);
    REQUIRE(ratchet::mean_kinetic(s) == 0.0);
    REQUIRE(s.norm_squared() == 1.0);
}

TEST_CASE("position samples of simple states", "[state]") {
    SECTION("flat state") {
        const auto samples = ratchet::position_samples(ratchet::uniform_initial_state(), 8);
        REQUIRE(samples.size() == 8);
        for (const cplx& v : samples)
            REQUIRE(std::norm(v) == Catch::Approx(1.0 / 8.0).margin(1e-15));
    }
    SECTION("plane wave k=1") {
        const MomentumState s(1, {cplx{1.0, 0.0}});
        const auto samples = ratchet::position_samples(s, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx want = std::polar(0.5, 2.0 * ratchet::kPi * static_cast<double>(j) / 4.0);
            REQUIRE(std::abs(samples[j] - want) < 1e-15);
        }
    }
    SECTION("grid underflow") {
        std::vector<cplx> amps(9, cplx{1.0 / 3.0, 0.0});
        const MomentumState wide(-4, amps);
        REQUIRE_THROWS_AS(ratchet::position_samples(wide, 8), std::invalid_argument);
    }
}

TEST_CASE("basis roundtrip is the identity", "[state]") {
    std::mt19937_64 rng{11};
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_int_distribution<std::int64_t> kmin(-40, 10);
        std::uniform_int_distribution<std::int64_t> size(1, 30);
        const MomentumState s = testsupport::random_state(rng, kmin(rng), size(rng));
        const std::int64_t n = static_cast<std::int64_t>(
            ratchet::detail::next_pow2(static_cast<std::size_t>(2 * s.size() + 32)));
        const auto samples = ratchet::position_samples(s, n);

        double sum = 0.0;
        for (const cplx& v : samples) sum += std::norm(v);
        REQUIRE(sum == Catch::Approx(s.norm_squared()).margin(1e-13));

        const std::int64_t center = s.k_min() + s.size() / 2;
        const MomentumState back =
            ratchet::from_position_samples(samples, center - n / 2, s.tail_tol());
        REQUIRE(testsupport::max_amplitude_difference(s, back) < 1e-13);
    }
}

TEST_CASE("constant samples collapse to the zero mode", "[state]") {
    std::vector<cplx> samples(32, cplx{1.0 / std::sqrt(32.0), 0.0});
    const MomentumState s = ratchet::from_position_samples(samples, -16);
    REQUIRE(s.size() == 1);
    REQUIRE(s.k_min() == 0);
    REQUIRE(std::abs(s.amplitude_at(0) - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("kick phase profile decomposes into Bessel amplitudes", "[state]") {
    // samples of e^{-iP sin x}/sqrt(2 pi) carry J_m(P) at momentum -m
    const double p = 0.5;
    const std::int64_t n = 64;
    std::vector<cplx> samples(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
        const double x = 2.0 * ratchet::kPi * static_cast<double>(j) / static_cast<double>(n);
        samples[static_cast<std::size_t>(j)] =
            std::polar(1.0 / std::sqrt(static_cast<double>(n)), -p * std::sin(x));
    }
    const MomentumState s = ratchet::from_position_samples(samples, -n / 2);
    REQUIRE(std::abs(s.amplitude_at(0)) ==
            Catch::Approx(std::fabs(testsupport::bessel_series(0, p))).margin(1e-12));
    for (int m = -6; m <= 6; ++m)
        REQUIRE(std::abs(s.amplitude_at(-m) - cplx{testsupport::bessel_series(m, p), 0.0}) <
                1e-12);
}

TEST_CASE("momentum window overflow is detected", "[state]") {
    // e^{-i 3 sin x} spreads far beyond an 8-site window
    const std::int64_t n = 8;
    std::vector<cplx> samples(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
        const double x = 2.0 * ratchet::kPi * static_cast<double>(j) / static_cast<double>(n);
        samples[static_cast<std::size_t>(j)] =
            std::polar(1.0 / std::sqrt(static_cast<double>(n)), -3.0 * std::sin(x));
    }
    REQUIRE_THROWS_AS(ratchet::from_position_samples(samples, -n / 2), ratchet::SimulationError);
}

TEST_CASE("trim and widen", "[state]") {
    std::vector<cplx> amps = {cplx{1e-6, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{1e-6, 0.0}};
    const MomentumState s(-1, amps, 1e-14);
    REQUIRE(s.trimmed().size() == 4);  // edge probability 1e-12 sits above tail_tol
    const MomentumState tight(-1, amps, 1e-10);
    const MomentumState t = tight.trimmed();
    REQUIRE(t.size() == 1);
    REQUIRE(t.k_min() == 1);
    REQUIRE(s.edge_probability(1) == Catch::Approx(1e-12).epsilon(1e-12));
    const MomentumState w = s.widened(3);
    REQUIRE(w.size() == 10);
    REQUIRE(w.k_min() == -4);
    REQUIRE(w.amplitude_at(1) == cplx{1.0, 0.0});
}

TEST_CASE("derive_params", "[state]") {
    ratchet::PhysicalUnits units{};
    units.omega_R = ratchet::kPi / 8.0;
    units.T = 1.0;
    units.V0 = 0.5;
    units.hbar = 1.0;
    units.k_L = 2.0;
    units.m = 1.0;

    const auto [kappa, p] = ratchet::derive_params(units);
    REQUIRE(kappa == Catch::Approx(ratchet::kPi).epsilon(1e-15));
    REQUIRE(p == Catch::Approx(0.5).epsilon(1e-15));
    REQUIRE(units.lambda() == Catch::Approx(ratchet::kPi).epsilon(1e-15));

    ratchet::PhysicalUnits doubled = units;
    doubled.T = 2.0 * units.T;
    const auto [kappa2, p2] = ratchet::derive_params(doubled);
    REQUIRE(kappa2 == Catch::Approx(2.0 * kappa).epsilon(1e-15));
    REQUIRE(p2 == Catch::Approx(2.0 * p).epsilon(1e-15));

    ratchet::PhysicalUnits bad = units;
    bad.V0 = 0.0;
    REQUIRE_THROWS_AS(ratchet::derive_params(bad), std::invalid_argument);
}
