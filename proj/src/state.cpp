#include "ratchet/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratchet/fft.hpp"

namespace ratchet {

namespace {

std::size_t wrap_index(std::int64_t k, std::size_t n) {
    const auto m = static_cast<std::int64_t>(n);
    std::int64_t r = k % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
}

}  // namespace

MomentumState::MomentumState(std::int64_t k_min, std::vector<cplx> amps, double tail_tol)
    : k_min_(k_min), amps_(std::move(amps)), tail_tol_(tail_tol) {
    if (amps_.empty()) throw std::invalid_argument("MomentumState: empty amplitude vector");
    if (!(tail_tol_ > 0.0)) throw std::invalid_argument("MomentumState: tail_tol must be > 0");
}

double MomentumState::norm_squared() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
}

double MomentumState::edge_probability(int sites) const {
    const std::int64_t n = size();
    const std::int64_t m = std::min<std::int64_t>(sites, n);
    double lo = 0.0, hi = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        lo += std::norm(amps_[static_cast<std::size_t>(i)]);
        hi += std::norm(amps_[static_cast<std::size_t>(n - 1 - i)]);
    }
    return std::max(lo, hi);
}

bool MomentumState::is_finite() const {
    for (const cplx& a : amps_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    return true;
}

MomentumState MomentumState::widened(std::int64_t pad) const {
    if (pad < 0) throw std::invalid_argument("MomentumState::widened: negative pad");
    std::vector<cplx> out(static_cast<std::size_t>(size() + 2 * pad), cplx{0.0, 0.0});
    std::copy(amps_.begin(), amps_.end(), out.begin() + static_cast<std::ptrdiff_t>(pad));
    return MomentumState(k_min_ - pad, std::move(out), tail_tol_);
}

MomentumState MomentumState::trimmed() const {
    const std::int64_t n = size();
    std::int64_t lo = 0, hi = n - 1;
    double acc = 0.0;
    while (lo < hi && acc + std::norm(amps_[static_cast<std::size_t>(lo)]) < tail_tol_)
        acc += std::norm(amps_[static_cast<std::size_t>(lo++)]);
    acc = 0.0;
    while (hi > lo && acc + std::norm(amps_[static_cast<std::size_t>(hi)]) < tail_tol_)
        acc += std::norm(amps_[static_cast<std::size_t>(hi--)]);
    std::vector<cplx> out(amps_.begin() + static_cast<std::ptrdiff_t>(lo),
                          amps_.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    return MomentumState(k_min_ + lo, std::move(out), tail_tol_);
}

MomentumState uniform_initial_state(double tail_tol) {
    return MomentumState(0, {cplx{1.0, 0.0}}, tail_tol);
}

std::vector<cplx> position_samples(const MomentumState& state, std::int64_t n_grid) {
    if (n_grid < state.size())
        throw std::invalid_argument("position_samples: grid underflow");
    const auto n = static_cast<std::size_t>(n_grid);
    if ((n & (n - 1)) != 0)
        throw std::invalid_argument("position_samples: grid size must be a power of two");
    std::vector<cplx> grid(n, cplx{0.0, 0.0});
    const auto amps = state.amps();
    for (std::int64_t i = 0; i < state.size(); ++i)
        grid[wrap_index(state.k_min() + i, n)] = amps[static_cast<std::size_t>(i)];
    detail::fft_pow2(grid, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (cplx& s : grid) s *= scale;
    return grid;
}

MomentumState from_position_samples(std::span<const cplx> samples, std::int64_t k_min,
                                    double tail_tol) {
    const std::size_t n = samples.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("from_position_samples: grid size must be a power of two");
    std::vector<cplx> grid(samples.begin(), samples.end());
    detail::fft_pow2(grid, -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cplx> amps(n);
    for (std::size_t i = 0; i < n; ++i)
        amps[i] = grid[wrap_index(k_min + static_cast<std::int64_t>(i), n)] * scale;

    MomentumState full(k_min, std::move(amps), tail_tol);
    if (full.edge_probability(8) >= tail_tol)
        throw SimulationError("momentum window overflow: edge-band probability above tail_tol");
    return full.trimmed();
}

std::pair<double, double> derive_params(const PhysicalUnits& units) {
    units.validate();
    const double kappa = 8.0 * units.omega_R * units.T;
    const double strength_p = units.T * units.V0 / units.hbar;  // K/kappa with K = kappa T V0/hbar
    return {kappa, strength_p};
}

}  // namespace ratchet
