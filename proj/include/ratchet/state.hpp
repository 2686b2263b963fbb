#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ratchet/types.hpp"

namespace ratchet {

/// Wavefunction on the integer momentum lattice: complex amplitudes c_k for
/// k = k_min() .. k_max() in the plane-wave basis e^{ikx}/sqrt(2 pi).
/// Immutable after construction; operations return new states.
class MomentumState {
public:
    MomentumState(std::int64_t k_min, std::vector<cplx> amps, double tail_tol = kDefaultTailTol);

    std::int64_t k_min() const { return k_min_; }
    std::int64_t k_max() const { return k_min_ + size() - 1; }
    std::int64_t size() const { return static_cast<std::int64_t>(amps_.size()); }
    std::span<const cplx> amps() const { return amps_; }
    double tail_tol() const { return tail_tol_; }

    /// Amplitude at momentum k; zero outside the stored window.
    cplx amplitude_at(std::int64_t k) const {
        if (k < k_min_ || k > k_max()) return {0.0, 0.0};
        return amps_[static_cast<std::size_t>(k - k_min_)];
    }

    double norm_squared() const;

    /// Largest of the two per-edge probabilities summed over the outermost
    /// `sites` lattice points.
    double edge_probability(int sites = 8) const;

    /// All amplitudes finite (no NaN/Inf).
    bool is_finite() const;

    /// Window extended by `pad` zero sites on each side.
    MomentumState widened(std::int64_t pad) const;

    /// Window shrunk from each edge while the dropped probability per edge
    /// stays below tail_tol. Never drops below one site.
    MomentumState trimmed() const;

private:
    std::int64_t k_min_;
    std::vector<cplx> amps_;
    double tail_tol_;
};

/// The spatially uniform initial condition psi(x,0) = 1/sqrt(2 pi):
/// amplitude 1 at k = 0 and nothing else.
MomentumState uniform_initial_state(double tail_tol = kDefaultTailTol);

/// Samples s_j = sqrt(2 pi / N) psi(x_j) on the grid x_j = 2 pi j / N, so that
/// sum_j |s_j|^2 = sum_k |c_k|^2. N must be a power of two covering the
/// occupied span ("grid underflow" otherwise).
std::vector<cplx> position_samples(const MomentumState& state, std::int64_t n_grid);

/// Inverse of position_samples on the momentum window [k_min, k_min + N).
/// Throws SimulationError("momentum window overflow") when the outermost
/// 8 sites at either edge of that window carry probability >= tail_tol
/// (aliasing). The returned state is trimmed.
MomentumState from_position_samples(std::span<const cplx> samples, std::int64_t k_min,
                                    double tail_tol = kDefaultTailTol);

/// Dimensionless map parameters from laboratory units:
/// kappa = 8 omega_R T, K = kappa T V0 / hbar, P = K / kappa = T V0 / hbar.
/// Returns {kappa, strength_P}.
std::pair<double, double> derive_params(const PhysicalUnits& units);

}  // namespace ratchet
