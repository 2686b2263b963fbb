#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ratchet/state.hpp"
#include "ratchet/types.hpp"

namespace ratchet {

/// Free evolution over the period fraction tau: c_k <- c_k e^{-i tau kappa k^2 / 2}.
/// Negative tau applies the inverse segment. Support and magnitudes unchanged.
MomentumState free_evolve(const MomentumState& state, double tau, double kappa);

/// One delta kick e^{-i P v(x)} applied by position-grid multiplication.
/// The momentum window is padded by the kick bandwidth, grown by 64 sites per
/// side while the edge-band probability stays >= tail_tol, and trimmed on
/// return. Throws SimulationError once the window would exceed k_cap.
MomentumState kick(const MomentumState& state, Potential potential, double strength_P,
                   double alpha, std::int64_t k_cap = kDefaultKCap);

/// One period of the map: free(eta), kick(slot1), free(1-eta), kick(slot2).
/// With eta = 0 the kicks coincide: free(1) then one Combined kick.
MomentumState period_step(const MomentumState& state, const RatchetParams& params);

struct EvolveResult {
    std::vector<TrajectoryRecord> records;
    /// Pre-kick states, two per period (the same state twice when eta = 0),
    /// filled only when record_half_steps is set.
    std::vector<MomentumState> pre_kick_states;
    MomentumState final_state;
};

/// n_periods applications of period_step with per-period observables.
/// period_force is always recorded; the pre-kick states are retained only on
/// request.
EvolveResult evolve(const MomentumState& initial, const RatchetParams& params,
                    std::int64_t n_periods, bool record_half_steps = false);

/// Explicit one-period operator on the truncated lattice k in [k_lo, k_hi]:
/// diagonal free phases and Bessel-convolution kick matrices. Independent of
/// the split-step path; used as its oracle.
Eigen::MatrixXcd dense_period_matrix(const RatchetParams& params, std::int64_t k_lo,
                                     std::int64_t k_hi);

/// max |(M^dagger M - I)_{ij}| over the interior block that excludes `margin`
/// rows/columns at each edge.
double interior_unitarity_error(const Eigen::MatrixXcd& m, Eigen::Index margin);

}  // namespace ratchet
