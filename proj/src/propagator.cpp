#include "ratchet/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ratchet/bessel.hpp"
#include "ratchet/fft.hpp"
#include "ratchet/observables.hpp"

namespace ratchet {

MomentumState free_evolve(const MomentumState& state, double tau, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("free_evolve: kappa must be > 0");
    if (!(tau >= -1.0 && tau <= 1.0))
        throw std::invalid_argument("free_evolve: tau must be in [-1, 1]");
    std::vector<cplx> amps(state.amps().begin(), state.amps().end());
    for (std::int64_t i = 0; i < state.size(); ++i) {
        const std::int64_t k = state.k_min() + i;
        const double phase = -0.5 * tau * kappa * static_cast<double>(k * k);
        amps[static_cast<std::size_t>(i)] *= std::polar(1.0, phase);
    }
    return MomentumState(state.k_min(), std::move(amps), state.tail_tol());
}

namespace {

// lattice half-bandwidth of the kick operator for the given potential
std::int64_t lattice_bandwidth(Potential potential, double strength_P, double alpha, double tol) {
    switch (potential) {
        case Potential::V1:
            return 2 * kick_bandwidth(strength_P * alpha, tol);
        case Potential::V2:
            return kick_bandwidth(strength_P, tol);
        case Potential::Combined:
            return kick_bandwidth(strength_P, tol) + 2 * kick_bandwidth(strength_P * alpha, tol);
    }
    throw std::invalid_argument("lattice_bandwidth: bad potential");
}

double potential_value(Potential potential, double alpha, double x) {
    switch (potential) {
        case Potential::V1:
            return alpha * std::sin(2.0 * x);
        case Potential::V2:
            return std::sin(x);
        case Potential::Combined:
            return alpha * std::sin(2.0 * x) + std::sin(x);
    }
    throw std::invalid_argument("potential_value: bad potential");
}

}  // namespace

MomentumState kick(const MomentumState& state, Potential potential, double strength_P,
                   double alpha, std::int64_t k_cap) {
    // negative strength applies the inverse kick e^{+i|P| v(x)}
    if (!std::isfinite(strength_P)) throw std::invalid_argument("kick: strength_P must be finite");
    if (!(alpha >= 0.0)) throw std::invalid_argument("kick: alpha must be >= 0");
    if (strength_P == 0.0) return state;
    if (potential == Potential::V1 && strength_P * alpha == 0.0) return state;

    const double tol = state.tail_tol();
    const std::int64_t band = lattice_bandwidth(potential, strength_P, alpha, tol);
    const std::int64_t pad = band + 8;

    for (std::int64_t extra = 0;; extra += 64) {
        const std::int64_t k_lo = state.k_min() - pad - extra;
        const std::int64_t k_hi = state.k_max() + pad + extra;
        if (std::max(std::llabs(k_lo), std::llabs(k_hi)) > k_cap)
            throw SimulationError(
                "momentum window overflow: |k| > k_cap = " + std::to_string(k_cap) +
                " while applying kick (P=" + std::to_string(strength_P) + ")");
        const std::int64_t span = k_hi - k_lo + 1;
        const auto n_grid =
            static_cast<std::int64_t>(detail::next_pow2(static_cast<std::size_t>(2 * span)));

        std::vector<cplx> samples = position_samples(state, n_grid);
        for (std::int64_t j = 0; j < n_grid; ++j) {
            const double x = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_grid);
            samples[static_cast<std::size_t>(j)] *=
                std::polar(1.0, -strength_P * potential_value(potential, alpha, x));
        }

        // centered momentum window for the back transform
        const std::int64_t center = k_lo + span / 2;
        const std::int64_t k_lo_full = center - n_grid / 2;
        try {
            return from_position_samples(samples, k_lo_full, tol);
        } catch (const SimulationError&) {
            // edge band touched: enlarge the window and retry
        }
    }
}

namespace {

struct StepDetail {
    MomentumState state;
    double force;
    MomentumState pre_kick1;
    MomentumState pre_kick2;
};

StepDetail step_with_detail(const MomentumState& state, const RatchetParams& params) {
    const double p = params.strength_P;
    const double a = params.alpha;
    if (params.eta == 0.0) {
        MomentumState s = free_evolve(state, 1.0, params.kappa);
        const double f = potential_gradient_expectation(s, Potential::Combined, p, a);
        MomentumState out = kick(s, Potential::Combined, p, a, params.k_cap);
        return {std::move(out), f, s, s};
    }
    const Potential slot1 = params.kick_order == KickOrder::V1First ? Potential::V1 : Potential::V2;
    const Potential slot2 = params.kick_order == KickOrder::V1First ? Potential::V2 : Potential::V1;

    MomentumState pre1 = free_evolve(state, params.eta, params.kappa);
    double f = potential_gradient_expectation(pre1, slot1, p, a);
    MomentumState s = kick(pre1, slot1, p, a, params.k_cap);
    MomentumState pre2 = free_evolve(s, 1.0 - params.eta, params.kappa);
    f += potential_gradient_expectation(pre2, slot2, p, a);
    MomentumState out = kick(pre2, slot2, p, a, params.k_cap);
    return {std::move(out), f, std::move(pre1), std::move(pre2)};
}

}  // namespace

MomentumState period_step(const MomentumState& state, const RatchetParams& params) {
    params.validate();
    return step_with_detail(state, params).state;
}

EvolveResult evolve(const MomentumState& initial, const RatchetParams& params,
                    std::int64_t n_periods, bool record_half_steps) {
    params.validate();
    if (n_periods < 1) throw std::invalid_argument("evolve: n_periods must be >= 1");

    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(n_periods));
    std::vector<MomentumState> pre_kicks;
    if (record_half_steps) pre_kicks.reserve(static_cast<std::size_t>(2 * n_periods));

    MomentumState state = initial;
    for (std::int64_t t = 1; t <= n_periods; ++t) {
        StepDetail step = step_with_detail(state, params);
        state = std::move(step.state);
        if (!state.is_finite())
            throw SimulationError("evolve: non-finite amplitude at period " + std::to_string(t));
        records.push_back(TrajectoryRecord{t, mean_momentum(state), mean_kinetic(state),
                                           std::fabs(1.0 - state.norm_squared()), step.force,
                                           state.k_min(), state.k_max()});
        if (record_half_steps) {
            pre_kicks.push_back(std::move(step.pre_kick1));
            pre_kicks.push_back(std::move(step.pre_kick2));
        }
    }
    return EvolveResult{std::move(records), std::move(pre_kicks), std::move(state)};
}

namespace {

Eigen::MatrixXcd dense_free_matrix(std::int64_t k_lo, std::int64_t n, double tau, double kappa) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t k = k_lo + i;
        m(i, i) = std::polar(1.0, -0.5 * tau * kappa * static_cast<double>(k * k));
    }
    return m;
}

// kick matrix element: row k', column k gets J_{k-k'}(z) (V2) or
// J_{(k-k')/2}(z) on even differences (V1)
Eigen::MatrixXcd dense_kick_matrix(std::int64_t n, Potential potential, double strength_P,
                                   double alpha) {
    const int maxd = static_cast<int>(n - 1);
    const double z = potential == Potential::V1 ? strength_P * alpha : strength_P;
    std::vector<double> j_of_d(static_cast<std::size_t>(2 * maxd + 1), 0.0);
    for (int d = -maxd; d <= maxd; ++d) {
        const int order = potential == Potential::V1 ? d / 2 : d;
        if (potential == Potential::V1 && d % 2 != 0) continue;
        j_of_d[static_cast<std::size_t>(d + maxd)] = bessel_J(order, z);
    }
    Eigen::MatrixXcd m(n, n);
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t c = 0; c < n; ++c)
            m(r, c) = j_of_d[static_cast<std::size_t>(c - r + maxd)];
    return m;
}

}  // namespace

Eigen::MatrixXcd dense_period_matrix(const RatchetParams& params, std::int64_t k_lo,
                                     std::int64_t k_hi) {
    params.validate();
    if (k_hi <= k_lo) throw std::invalid_argument("dense_period_matrix: empty momentum range");
    const std::int64_t n = k_hi - k_lo + 1;

    if (params.eta == 0.0) {
        Eigen::MatrixXcd kick_c = dense_kick_matrix(n, Potential::V1, params.strength_P, params.alpha) *
                                  dense_kick_matrix(n, Potential::V2, params.strength_P, params.alpha);
        return kick_c * dense_free_matrix(k_lo, n, 1.0, params.kappa);
    }
    const Potential slot1 = params.kick_order == KickOrder::V1First ? Potential::V1 : Potential::V2;
    const Potential slot2 = params.kick_order == KickOrder::V1First ? Potential::V2 : Potential::V1;
    Eigen::MatrixXcd m = dense_free_matrix(k_lo, n, params.eta, params.kappa);
    m = dense_kick_matrix(n, slot1, params.strength_P, params.alpha) * m;
    m = dense_free_matrix(k_lo, n, 1.0 - params.eta, params.kappa) * m;
    m = dense_kick_matrix(n, slot2, params.strength_P, params.alpha) * m;
    return m;
}

double interior_unitarity_error(const Eigen::MatrixXcd& m, Eigen::Index margin) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("interior_unitarity_error: matrix not square");
    if (2 * margin >= n) throw std::invalid_argument("interior_unitarity_error: margin too large");
    Eigen::MatrixXcd g = m.adjoint() * m;
    g.diagonal().array() -= 1.0;
    return g.block(margin, margin, n - 2 * margin, n - 2 * margin).cwiseAbs().maxCoeff();
}

}  // namespace ratchet
