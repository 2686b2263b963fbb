#pragma once

#include "ratchet/types.hpp"

namespace ratchet {

/// Bessel function of the first kind J_m(z), any integer order, |z| < 1e4.
/// Downward (Miller) recurrence with sum normalization.
double bessel_J(int m, double z);

/// Momentum half-bandwidth of the kick e^{-i z sin(theta)}: the smallest b
/// with sum_{|m|>b} J_m(z)^2 < tol/4. Cached per (z, tol).
int kick_bandwidth(double z, double tol);

}  // namespace ratchet
