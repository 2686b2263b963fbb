#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ratchet/state.hpp"
#include "ratchet/types.hpp"

namespace ratchet {

/// <k> = sum_k k |c_k|^2
double mean_momentum(const MomentumState& state);

/// <k^2> = sum_k k^2 |c_k|^2
double mean_kinetic(const MomentumState& state);

/// Probabilities above tail_tol, sorted by k.
std::vector<std::pair<std::int64_t, double>> momentum_distribution(const MomentumState& state);

/// P * <dv/dx>, contracted from the state's two-point coherences:
/// <cos x> = Re sum_k c_k^* c_{k-1}, <cos 2x> = Re sum_k c_k^* c_{k-2}.
/// dv/dx is 2 alpha cos(2x) for V1, cos(x) for V2, their sum for Combined.
double potential_gradient_expectation(const MomentumState& state, Potential potential,
                                      double strength_P, double alpha);

/// Force accumulated over one period: P<dv_slot1/dx> on the state just before
/// the first kick plus P<dv_slot2/dx> on the state just before the second.
/// Sign convention: the change of <k> across the period equals -period_force.
double period_force(const MomentumState& pre_kick1_state, const MomentumState& pre_kick2_state,
                    const RatchetParams& params);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line over the samples with t in [t0, t1] (inclusive).
/// Requires at least 10 points in the window.
LineFit slope_fit(std::span<const std::pair<double, double>> series, double t0, double t1);

/// Convenience overload for trajectory records: fits mean_k against t.
LineFit slope_fit(std::span<const TrajectoryRecord> records, std::int64_t t0, std::int64_t t1);

}  // namespace ratchet
