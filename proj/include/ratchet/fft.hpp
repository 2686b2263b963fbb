#pragma once

#include <span>
#include <vector>

#include "ratchet/types.hpp"

namespace ratchet::detail {

/// In-place radix-2 complex FFT on a power-of-two length.
/// sign = -1: forward, a_m <- sum_j a_j e^{-2 pi i m j / N}
/// sign = +1: inverse, unnormalized (caller divides by N if needed).
/// Twiddle tables are cached per length; results are bit-identical across
/// calls and threads.
void fft_pow2(std::span<cplx> data, int sign);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace ratchet::detail
