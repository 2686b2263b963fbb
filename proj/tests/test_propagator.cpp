#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ratchet/bessel.hpp"
#include "ratchet/observables.hpp"
#include "ratchet/propagator.hpp"
#include "ratchet/state.hpp"
#include "test_support.hpp"

using ratchet::cplx;
using ratchet::KickOrder;
using ratchet::MomentumState;
using ratchet::Potential;
using ratchet::RatchetParams;

namespace {

RatchetParams resonant_point() {
    RatchetParams p;
    p.kappa = ratchet::kPi;
    p.eta = 0.5;
    p.strength_P = 0.5;
    p.alpha = 0.3;
    return p;
}

}  // namespace

TEST_CASE("free evolution phases", "[propagator]") {
    std::mt19937_64 rng{3};
    const MomentumState s = testsupport::random_state(rng, -6, 13);

    SECTION("tau = 0 is the identity") {
        REQUIRE(testsupport::max_amplitude_difference(s, ratchet::free_evolve(s, 0.0, 2.0)) == 0.0);
    }
    SECTION("kappa = 4 pi over a full period is the identity") {
        const MomentumState out = ratchet::free_evolve(s, 1.0, 4.0 * ratchet::kPi);
        REQUIRE(testsupport::max_amplitude_difference(s, out) < 1e-12);
    }
    SECTION("kappa = pi, tau = 1/2, k = 1 picks up e^{-i pi/4}") {
        const MomentumState one(1, {cplx{1.0, 0.0}});
        const MomentumState out = ratchet::free_evolve(one, 0.5, ratchet::kPi);
        REQUIRE(std::abs(out.amplitude_at(1) - std::polar(1.0, -ratchet::kPi / 4.0)) < 1e-15);
    }
    SECTION("magnitudes and moments are preserved") {
        const MomentumState out = ratchet::free_evolve(s, 0.37, 1.7);
        for (std::int64_t k = s.k_min(); k <= s.k_max(); ++k)
            REQUIRE(std::abs(out.amplitude_at(k)) ==
                    Catch::Approx(std::abs(s.amplitude_at(k))).margin(1e-15));
        REQUIRE(ratchet::mean_momentum(out) ==
                Catch::Approx(ratchet::mean_momentum(s)).margin(1e-12));
        REQUIRE(ratchet::mean_kinetic(out) ==
                Catch::Approx(ratchet::mean_kinetic(s)).margin(1e-12));
    }
    SECTION("inverse segment undoes the forward one") {
        const MomentumState out =
            ratchet::free_evolve(ratchet::free_evolve(s, 0.4, 1.3), -0.4, 1.3);
        REQUIRE(testsupport::max_amplitude_difference(s, out) < 1e-14);
    }
}

TEST_CASE("kick limits and conventions", "[propagator]") {
    const MomentumState uniform = ratchet::uniform_initial_state();

    SECTION("P = 0 is the identity") {
        const MomentumState out = ratchet::kick(uniform, Potential::V2, 0.0, 0.3);
        REQUIRE(out.size() == 1);
        REQUIRE(out.amplitude_at(0) == cplx{1.0, 0.0});
    }
    SECTION("V2 kick spreads as J_k(P)^2 with c_k = J_{-k}(P)") {
        const double p = 0.5;
        const MomentumState out = ratchet::kick(uniform, Potential::V2, p, 0.3);
        REQUIRE(std::fabs(1.0 - out.norm_squared()) < 1e-13);
        for (int k = -5; k <= 5; ++k)
            REQUIRE(std::abs(out.amplitude_at(k) -
                             cplx{testsupport::bessel_series(-k, p), 0.0}) < 1e-12);
        // probability leaks symmetrically; the sign convention shows in the
        // amplitudes: c_{-1} = +J_1, c_{+1} = -J_1
        REQUIRE(out.amplitude_at(-1).real() > 0.0);
        REQUIRE(out.amplitude_at(1).real() < 0.0);
    }
    SECTION("V1 kick energy: 2 (P alpha)^2") {
        const MomentumState out = ratchet::kick(uniform, Potential::V1, 0.5, 0.3);
        REQUIRE(ratchet::mean_kinetic(out) == Catch::Approx(0.045).margin(1e-12));
        // independent route: sum (2m)^2 J_m(P alpha)^2 from the series
        double direct = 0.0;
        for (int m = 1; m <= 20; ++m) {
            const double jm = testsupport::bessel_series(m, 0.15);
            direct += 2.0 * 4.0 * m * m * jm * jm;
        }
        REQUIRE(ratchet::mean_kinetic(out) == Catch::Approx(direct).margin(1e-12));
        // V1 couples only even momentum differences
        REQUIRE(std::abs(out.amplitude_at(1)) < 1e-15);
        REQUIRE(std::abs(out.amplitude_at(-1)) < 1e-15);
    }
    SECTION("k_cap guard trips") {
        REQUIRE_THROWS_AS(ratchet::kick(uniform, Potential::V2, 2.0, 0.3, 8),
                          ratchet::SimulationError);
    }
}

TEST_CASE("Ehrenfest kick identity", "[propagator]") {
    std::mt19937_64 rng{17};
    std::uniform_real_distribution<double> pdist(0.0, 4.0);
    std::uniform_real_distribution<double> adist(0.0, 1.0);
    std::uniform_int_distribution<int> potdist(0, 2);
    for (int rep = 0; rep < 25; ++rep) {
        const MomentumState s = testsupport::random_state(rng, -15 + rep % 7, 24);
        const double p = pdist(rng);
        const double a = adist(rng);
        const auto pot = static_cast<Potential>(potdist(rng));
        const MomentumState out = ratchet::kick(s, pot, p, a);
        const double dk = ratchet::mean_momentum(out) - ratchet::mean_momentum(s);
        const double grad = ratchet::potential_gradient_expectation(s, pot, p, a);
        REQUIRE(dk == Catch::Approx(-grad).margin(1e-9));
        REQUIRE(std::fabs(out.norm_squared() - s.norm_squared()) < 1e-12);
    }
}

TEST_CASE("period step structure", "[propagator]") {
    std::mt19937_64 rng{23};
    const MomentumState s = testsupport::random_state(rng, -8, 17);

    SECTION("P = 0 reduces to one free period") {
        RatchetParams params = resonant_point();
        params.strength_P = 0.0;
        const MomentumState got = ratchet::period_step(s, params);
        const MomentumState want = ratchet::free_evolve(s, 1.0, params.kappa);
        REQUIRE(testsupport::max_amplitude_difference(got, want) < 1e-14);
    }
    SECTION("eta = 0 collapses to free(1) then one combined kick") {
        RatchetParams params = resonant_point();
        params.eta = 0.0;
        const MomentumState got = ratchet::period_step(s, params);
        const MomentumState want = ratchet::kick(ratchet::free_evolve(s, 1.0, params.kappa),
                                                 Potential::Combined, params.strength_P,
                                                 params.alpha);
        REQUIRE(testsupport::max_amplitude_difference(got, want) < 1e-14);
    }
    SECTION("norm is conserved") {
        for (double eta : {0.0, 0.3, 0.5}) {
            RatchetParams params = resonant_point();
            params.eta = eta;
            params.strength_P = 1.7;
            const MomentumState got = ratchet::period_step(s, params);
            REQUIRE(std::fabs(got.norm_squared() - s.norm_squared()) < 1e-12);
        }
    }
}

TEST_CASE("evolve records", "[propagator]") {
    SECTION("P = 0 stays at k = 0") {
        RatchetParams params = resonant_point();
        params.strength_P = 0.0;
        const auto result = ratchet::evolve(ratchet::uniform_initial_state(), params, 1);
        REQUIRE(result.records.size() == 1);
        REQUIRE(result.records[0].mean_k == 0.0);
        REQUIRE(result.records[0].mean_k2 == 0.0);
    }
    SECTION("per-period force obeys the Ehrenfest identity") {
        for (double eta : {0.0, 0.5}) {
            for (KickOrder order : {KickOrder::V1First, KickOrder::V2First}) {
                RatchetParams params = resonant_point();
                params.eta = eta;
                params.kick_order = order;
                const auto result =
                    ratchet::evolve(ratchet::uniform_initial_state(), params, 12, true);
                REQUIRE(result.pre_kick_states.size() == 24);
                double prev = 0.0;
                for (std::size_t t = 0; t < 12; ++t) {
                    const double dk = result.records[t].mean_k - prev;
                    prev = result.records[t].mean_k;
                    REQUIRE(dk == Catch::Approx(-result.records[t].period_force).margin(1e-9));
                    const double refit = ratchet::period_force(result.pre_kick_states[2 * t],
                                                               result.pre_kick_states[2 * t + 1],
                                                               params);
                    REQUIRE(refit ==
                            Catch::Approx(result.records[t].period_force).margin(1e-12));
                }
            }
        }
    }
    SECTION("unitarity holds over 200 periods at P = 4") {
        RatchetParams params = resonant_point();
        params.strength_P = 4.0;
        const auto result = ratchet::evolve(ratchet::uniform_initial_state(), params, 200);
        for (const auto& r : result.records) REQUIRE(r.norm_error < 1e-10);
    }
    SECTION("alpha = 0 gives no current") {
        RatchetParams params = resonant_point();
        params.alpha = 0.0;
        const auto result = ratchet::evolve(ratchet::uniform_initial_state(), params, 200);
        for (const auto& r : result.records) REQUIRE(std::fabs(r.mean_k) < 1e-10);
    }
}

TEST_CASE("dense period matrix is the split-step oracle", "[propagator][oracle]") {
    SECTION("P = 0 is diagonal free phases") {
        RatchetParams params = resonant_point();
        params.strength_P = 0.0;
        const Eigen::MatrixXcd m = ratchet::dense_period_matrix(params, -5, 5);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (r == c) {
                    const double k = static_cast<double>(r - 5);
                    const cplx want = std::polar(1.0, -0.5 * params.kappa * k * k);
                    REQUIRE(std::abs(m(r, c) - want) < 1e-14);
                } else {
                    REQUIRE(std::abs(m(r, c)) < 1e-14);
                }
            }
    }
    SECTION("interior unitarity") {
        const Eigen::MatrixXcd m = ratchet::dense_period_matrix(resonant_point(), -48, 48);
        REQUIRE(ratchet::interior_unitarity_error(m, 16) < 1e-10);
    }
    SECTION("50-period equivalence at the resonant point") {
        RatchetParams params = resonant_point();
        params.tail_tol = 1e-26;  // keep split-step truncation below the tolerance
        const std::int64_t w = 128;
        const Eigen::MatrixXcd m = ratchet::dense_period_matrix(params, -w, w);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * w + 1);
        v(w) = 1.0;
        for (int t = 0; t < 50; ++t) v = m * v;

        const auto result = ratchet::evolve(ratchet::uniform_initial_state(params.tail_tol),
                                            params, 50);
        const MomentumState& split = result.final_state;
        double worst = 0.0;
        for (std::int64_t k = -w; k <= w; ++k)
            worst = std::max(worst,
                             std::abs(split.amplitude_at(k) - v(k + w)));
        REQUIRE(worst < 1e-9);
    }
    SECTION("10-period equivalence, reversed order and eta = 0.3") {
        RatchetParams params = resonant_point();
        params.eta = 0.3;
        params.kick_order = KickOrder::V2First;
        params.strength_P = 1.1;
        params.tail_tol = 1e-26;
        const std::int64_t w = 96;
        const Eigen::MatrixXcd m = ratchet::dense_period_matrix(params, -w, w);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * w + 1);
        v(w) = 1.0;
        for (int t = 0; t < 10; ++t) v = m * v;
        const auto result = ratchet::evolve(ratchet::uniform_initial_state(params.tail_tol),
                                            params, 10);
        double worst = 0.0;
        for (std::int64_t k = -w; k <= w; ++k)
            worst = std::max(worst, std::abs(result.final_state.amplitude_at(k) - v(k + w)));
        REQUIRE(worst < 1e-10);
    }
}
