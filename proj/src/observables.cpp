#include "ratchet/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace ratchet {

double mean_momentum(const MomentumState& state) {
    const auto amps = state.amps();
    double s = 0.0;
    for (std::int64_t i = 0; i < state.size(); ++i)
        s += static_cast<double>(state.k_min() + i) * std::norm(amps[static_cast<std::size_t>(i)]);
    return s;
}

double mean_kinetic(const MomentumState& state) {
    const auto amps = state.amps();
    double s = 0.0;
    for (std::int64_t i = 0; i < state.size(); ++i) {
        const auto k = static_cast<double>(state.k_min() + i);
        s += k * k * std::norm(amps[static_cast<std::size_t>(i)]);
    }
    return s;
}

std::vector<std::pair<std::int64_t, double>> momentum_distribution(const MomentumState& state) {
    const auto amps = state.amps();
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::int64_t i = 0; i < state.size(); ++i) {
        const double p = std::norm(amps[static_cast<std::size_t>(i)]);
        if (p > state.tail_tol()) out.emplace_back(state.k_min() + i, p);
    }
    return out;
}

namespace {

// Re sum_k c_k^* c_{k-step}; <cos(step * x)> on the lattice.
double coherence(std::span<const cplx> a, std::size_t step) {
    if (a.size() <= step) return 0.0;
    double s = 0.0;
    for (std::size_t i = step; i < a.size(); ++i)
        s += (std::conj(a[i]) * a[i - step]).real();
    return s;
}

}  // namespace

double potential_gradient_expectation(const MomentumState& state, Potential potential,
                                      double strength_P, double alpha) {
    const auto a = state.amps();
    switch (potential) {
        case Potential::V1:
            return strength_P * alpha * 2.0 * coherence(a, 2);
        case Potential::V2:
            return strength_P * coherence(a, 1);
        case Potential::Combined:
            return strength_P * (alpha * 2.0 * coherence(a, 2) + coherence(a, 1));
    }
    throw std::invalid_argument("potential_gradient_expectation: bad potential");
}

double period_force(const MomentumState& pre_kick1_state, const MomentumState& pre_kick2_state,
                    const RatchetParams& params) {
    params.validate();
    if (params.eta == 0.0) {
        // coincident kicks: both gradients taken on the single pre-kick state
        return potential_gradient_expectation(pre_kick1_state, Potential::Combined,
                                              params.strength_P, params.alpha);
    }
    const Potential slot1 = params.kick_order == KickOrder::V1First ? Potential::V1 : Potential::V2;
    const Potential slot2 = params.kick_order == KickOrder::V1First ? Potential::V2 : Potential::V1;
    return potential_gradient_expectation(pre_kick1_state, slot1, params.strength_P, params.alpha) +
           potential_gradient_expectation(pre_kick2_state, slot2, params.strength_P, params.alpha);
}

LineFit slope_fit(std::span<const std::pair<double, double>> series, double t0, double t1) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const auto& [t, v] : series) {
        if (t < t0 || t > t1) continue;
        sx += t;
        sy += v;
        sxx += t * t;
        sxy += t * v;
        ++n;
    }
    if (n < 10) throw std::invalid_argument("slope_fit: window must contain at least 10 points");
    const double dn = static_cast<double>(n);
    const double det = dn * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("slope_fit: degenerate window");
    LineFit fit;
    fit.slope = (dn * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / dn;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean = sy / dn;
    for (const auto& [t, v] : series) {
        if (t < t0 || t > t1) continue;
        const double pred = fit.slope * t + fit.intercept;
        ss_res += (v - pred) * (v - pred);
        ss_tot += (v - mean) * (v - mean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

LineFit slope_fit(std::span<const TrajectoryRecord> records, std::int64_t t0, std::int64_t t1) {
    std::vector<std::pair<double, double>> series;
    series.reserve(records.size());
    for (const TrajectoryRecord& r : records)
        series.emplace_back(static_cast<double>(r.t), r.mean_k);
    return slope_fit(series, static_cast<double>(t0), static_cast<double>(t1));
}

}  // namespace ratchet
