#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ratchet {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultTailTol = 1e-14;
inline constexpr std::int64_t kDefaultKCap = std::int64_t{1} << 16;
inline constexpr double kDefaultAlpha = 0.3;

/// Numerical guard tripped during a run (momentum window overflow,
/// unitarity breach, undefined metric, ...). The CLI maps this to exit 3.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed run configuration. The CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Which flashing potential a kick applies.
/// V1 = alpha*sin(2x), V2 = sin(x), Combined = alpha*sin(2x) + sin(x).
enum class Potential { V1, V2, Combined };

/// Which potential occupies the first kick slot of a period.
enum class KickOrder { V1First, V2First };

/// Dimensionless model parameters of the kicked flashing ratchet.
struct RatchetParams {
    double kappa = kPi;          // effective Planck constant, radians
    double strength_P = 0.5;     // P = K / kappa
    double alpha = kDefaultAlpha;
    double eta = 0.5;            // time delay between the two kick trains, in [0,1)
    KickOrder kick_order = KickOrder::V1First;
    double tail_tol = kDefaultTailTol;
    std::int64_t k_cap = kDefaultKCap;

    void validate() const {
        if (!(kappa > 0.0)) throw std::invalid_argument("RatchetParams: kappa must be > 0");
        if (!(strength_P >= 0.0)) throw std::invalid_argument("RatchetParams: strength_P must be >= 0");
        if (!(alpha >= 0.0)) throw std::invalid_argument("RatchetParams: alpha must be >= 0");
        if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("RatchetParams: eta must be in [0,1)");
        if (!(tail_tol > 0.0)) throw std::invalid_argument("RatchetParams: tail_tol must be > 0");
        if (k_cap < 64) throw std::invalid_argument("RatchetParams: k_cap too small");
    }
};

/// Per-period observables of a trajectory.
struct TrajectoryRecord {
    std::int64_t t = 0;        // period index, 1-based
    double mean_k = 0.0;
    double mean_k2 = 0.0;
    double norm_error = 0.0;   // |1 - sum |c_k|^2|
    double period_force = 0.0; // sum of P<dv/dx> at the two kick instants
    std::int64_t k_min = 0;
    std::int64_t k_max = 0;
};

/// Laboratory-frame quantities the dimensionless map is derived from.
struct PhysicalUnits {
    double omega_R; // recoil frequency
    double T;       // flash period
    double V0;      // potential amplitude
    double hbar;
    double k_L;     // laser wavenumber
    double m;       // particle mass

    double lambda() const { return 2.0 * kPi / k_L; }

    void validate() const {
        if (!(omega_R > 0.0 && T > 0.0 && V0 > 0.0 && hbar > 0.0 && k_L > 0.0 && m > 0.0))
            throw std::invalid_argument("PhysicalUnits: all fields must be strictly positive");
    }
};

}  // namespace ratchet
