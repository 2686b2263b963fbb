#include "ratchet/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ratchet/observables.hpp"
#include "ratchet/state.hpp"

namespace ratchet {

namespace {

// mean of <k> over periods 10..40 inclusive ("the first few tens of kicks")
double early_current(const std::vector<TrajectoryRecord>& records) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const TrajectoryRecord& r : records) {
        if (r.t < 10 || r.t > 40) continue;
        acc += r.mean_k;
        ++n;
    }
    return n > 0 ? acc / static_cast<double>(n) : 0.0;
}

// run fn(i) for i in [0, count) on sweep_thread_count() workers; results land
// in index order, so parallel output is identical to sequential output
void parallel_for_index(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
    const int threads = std::min<std::int64_t>(sweep_thread_count(), count);
    if (threads <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

SweepResult run_sweep(std::string parameter, const RatchetParams& base,
                      std::vector<double> values, std::int64_t n_periods,
                      const std::function<RatchetParams(RatchetParams, double)>& configure) {
    if (values.empty()) throw std::invalid_argument("sweep: empty value list");
    SweepResult result;
    result.parameter = std::move(parameter);
    result.values = std::move(values);
    result.n_periods = n_periods;
    result.base_params = base;
    const std::size_t n = result.values.size();
    result.final_mean_k.resize(n);
    result.early_mean_k.resize(n);
    result.series.resize(n);

    parallel_for_index(static_cast<std::int64_t>(n), [&](std::int64_t i) {
        const RatchetParams point = configure(base, result.values[static_cast<std::size_t>(i)]);
        std::vector<TrajectoryRecord> records = time_series_experiment(point, n_periods);
        result.final_mean_k[static_cast<std::size_t>(i)] = records.back().mean_k;
        result.early_mean_k[static_cast<std::size_t>(i)] = early_current(records);
        result.series[static_cast<std::size_t>(i)] = std::move(records);
    });
    return result;
}

}  // namespace

int sweep_thread_count() {
    if (const char* env = std::getenv("RATCHET_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<TrajectoryRecord> time_series_experiment(const RatchetParams& params,
                                                     std::int64_t n_periods) {
    params.validate();
    return evolve(uniform_initial_state(params.tail_tol), params, n_periods).records;
}

std::vector<double> default_eta_list() {
    return {1.0 / 7.0, 2.0 / 7.0, 3.0 / 8.0, 1.0 / 2.0, 5.0 / 9.0, 2.0 / 3.0, 7.0 / 10.0,
            4.0 / 5.0};
}

std::vector<double> default_kappa_list() {
    std::vector<double> out;
    out.reserve(81);
    for (int i = 1; i <= 80; ++i) {
        const double k = 0.05 * static_cast<double>(i);
        // the named 2.625 pi resonance falls between the 0.05 pi grid points
        if (0.05 * static_cast<double>(i - 1) < 2.625 && 2.625 < k)
            out.push_back(2.625 * kPi);
        out.push_back(k * kPi);
    }
    return out;
}

SweepResult eta_sweep(const RatchetParams& params, std::vector<double> etas,
                      std::int64_t n_periods) {
    if (etas.empty()) etas = default_eta_list();
    return run_sweep("eta", params, std::move(etas), n_periods,
                     [](RatchetParams p, double v) {
                         p.eta = v;
                         return p;
                     });
}

SweepResult strength_sweep(const RatchetParams& params, std::vector<double> strengths,
                           std::int64_t n_periods) {
    return run_sweep("strength_P", params, std::move(strengths), n_periods,
                     [](RatchetParams p, double v) {
                         p.strength_P = v;
                         return p;
                     });
}

SweepResult kappa_sweep(const RatchetParams& params, std::vector<double> kappas,
                        std::int64_t n_periods) {
    if (kappas.empty()) kappas = default_kappa_list();
    return run_sweep("kappa", params, std::move(kappas), n_periods,
                     [](RatchetParams p, double v) {
                         p.kappa = v;
                         return p;
                     });
}

double order_reversal_difference(const RatchetParams& params, std::int64_t n_periods) {
    RatchetParams first = params;
    first.kick_order = KickOrder::V1First;
    RatchetParams second = params;
    second.kick_order = KickOrder::V2First;

    double k1 = 0.0, k2 = 0.0;
    parallel_for_index(2, [&](std::int64_t i) {
        const std::vector<TrajectoryRecord> records =
            time_series_experiment(i == 0 ? first : second, n_periods);
        (i == 0 ? k1 : k2) = records.back().mean_k;
    });
    const double denom = k1 + k2;
    if (std::fabs(denom) < 1e-8)
        throw SimulationError("order_reversal_difference: metric undefined (<k1> + <k2> ~ 0)");
    return std::fabs(2.0 * (k1 - k2) / denom);
}

double find_reversal_strength(const RatchetParams& params, double p_lo, double p_hi,
                              std::int64_t n_periods) {
    if (!(p_lo < p_hi)) throw std::invalid_argument("find_reversal_strength: need p_lo < p_hi");
    const auto final_current = [&](double p) {
        RatchetParams point = params;
        point.strength_P = p;
        return time_series_experiment(point, n_periods).back().mean_k;
    };
    double f_lo = final_current(p_lo);
    const double f_hi = final_current(p_hi);
    if ((f_lo < 0.0) == (f_hi < 0.0))
        throw SimulationError("find_reversal_strength: no sign change of <k> on the interval");
    double lo = p_lo, hi = p_hi;
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = final_current(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ratchet
