#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ratchet/state.hpp"
#include "ratchet/types.hpp"

namespace ratchet {

/// One-period unitary restricted to a Bloch quasi-position fiber at the
/// kappa = pi resonance. d = 4 for eta = 1/2 (sublattice x0 + l pi/2),
/// d = 2 for eta = 0 (sublattice x0 + l pi).
struct FiberUnitary {
    double x0;
    Eigen::MatrixXcd matrix;
};

/// Quasienergy bands sampled on a uniform x0 grid.
/// bands[b][i] is the eigenphase of band b at x0_grid[i], stored in [0, 2 pi).
struct BandSpectrum {
    std::vector<double> x0_grid;
    std::vector<std::vector<double>> bands;
};

/// Closed-form quasienergies at kappa = pi, eta = 1/2, returned as
/// {pi/4 - S, pi/4 - Sbar, pi/4 + S, pi/4 + Sbar} = (w1, w2, w3, w4).
/// S and Sbar are evaluated with atan2 on (denominator, numerator), which
/// keeps the branch continuous through vanishing denominators.
std::array<double, 4> analytic_quasienergies(double x0, double strength_P, double alpha);

/// Closed-form unit eigenvectors matching analytic_quasienergies:
/// vectors 1 and 3 live on fiber components {0, 2}, vectors 2 and 4 on {1, 3}.
/// Convention: fiber_unitary(x0).matrix * v[mu] = e^{-i w[mu]} * v[mu].
std::array<Eigen::Vector4cd, 4> analytic_eigenvectors(double x0, double strength_P, double alpha);

/// Numeric fiber unitary; requires kappa = pi and eta in {0, 1/2}
/// ("no closed fiber" otherwise). Kicks are diagonal in the fiber points;
/// free segments are circulants diagonalized by the d-point DFT.
FiberUnitary fiber_unitary(double x0, const RatchetParams& params);

/// Eigenphases of fiber_unitary on a uniform x0 grid (spanning [0, pi/2) for
/// eta = 1/2, [0, pi) for eta = 0), assigned to bands by sublattice family
/// and branch so that band curves pass through crossings:
/// eta = 1/2: bands 1,2 = even-component family (pi/4 -+ S),
///            bands 3,4 = odd-component family (pi/4 -+ Sbar).
BandSpectrum band_scan(const RatchetParams& params, int x0_count);

/// Smallest circular gap between two bands over the sampled grid.
double min_band_gap(const BandSpectrum& spectrum, int band_a, int band_b);

/// min_band_gap refined by bisection on the sign of the (unwrapped) band
/// difference between grid points; returns the smallest gap found.
double refined_min_band_gap(const RatchetParams& params, int band_a, int band_b, int coarse_points);

/// Wavefunction at integer time t assembled from the fiber eigendecomposition
/// (kappa = pi, eta = 1/2 only), on the momentum window [-k_window, k_window].
MomentumState reconstruct_integer_time(std::int64_t t, const RatchetParams& params,
                                       std::int64_t k_window);

/// psi(t - 1/2) from psi(t): inverse of the final kick, then the inverse of
/// the final free segment of the period.
MomentumState half_period_state(const MomentumState& state_at_t, const RatchetParams& params);

}  // namespace ratchet
