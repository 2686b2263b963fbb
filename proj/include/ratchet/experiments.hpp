#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratchet/propagator.hpp"
#include "ratchet/types.hpp"

namespace ratchet {

/// One row per parameter value; identical config produces identical rows.
struct SweepResult {
    std::string parameter;             // "eta", "strength_P" or "kappa"
    std::vector<double> values;
    std::vector<double> final_mean_k;  // <k> at the last period
    std::vector<double> early_mean_k;  // mean of <k> over periods 10..40
    std::vector<std::vector<TrajectoryRecord>> series;
    std::int64_t n_periods = 0;
    RatchetParams base_params;
};

/// Full per-period records of one trajectory from the uniform state.
std::vector<TrajectoryRecord> time_series_experiment(const RatchetParams& params,
                                                     std::int64_t n_periods);

/// The eight time delays of the eta study.
std::vector<double> default_eta_list();

/// kappa/pi in {0.05, 0.10, ..., 4.00} plus the named resonance 2.625 pi.
std::vector<double> default_kappa_list();

SweepResult eta_sweep(const RatchetParams& params, std::vector<double> etas,
                      std::int64_t n_periods);
SweepResult strength_sweep(const RatchetParams& params, std::vector<double> strengths,
                           std::int64_t n_periods);
SweepResult kappa_sweep(const RatchetParams& params, std::vector<double> kappas,
                        std::int64_t n_periods);

/// |2 (<k1> - <k2>) / (<k1> + <k2>)| of the final currents for the two kick
/// orders. Throws SimulationError("metric undefined") when the denominator
/// vanishes.
double order_reversal_difference(const RatchetParams& params, std::int64_t n_periods);

/// Bisection on the sign of the final <k> as a function of P, to width 0.01.
/// Requires a sign change across [p_lo, p_hi].
double find_reversal_strength(const RatchetParams& params, double p_lo, double p_hi,
                              std::int64_t n_periods);

/// Worker count used for sweep points: RATCHET_THREADS when set, otherwise
/// the hardware concurrency.
int sweep_thread_count();

}  // namespace ratchet
