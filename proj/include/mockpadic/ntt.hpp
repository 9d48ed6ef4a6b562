#pragma once

// Exact integer convolution through several 62-bit NTT primes, reconstructed
// by Garner's algorithm directly into a residue ring.

#include <cstddef>
#include <span>
#include <vector>

#include "mockpadic/residue_ring.hpp"

namespace mockpadic::ntt {

/// Number of NTT primes available; bounds the product size that can be
/// reconstructed exactly.
inline constexpr int kPrimeCount = 6;

/// Primes needed so that their product exceeds terms * (modulus - 1)^2.
/// Throws ResourceExhausted when kPrimeCount does not suffice.
int primes_needed(const ResidueRing& ring, std::size_t terms);

/// c = a * b truncated to out_len terms, computed exactly over the integers
/// from the residue representatives and reduced into `ring`.
std::vector<u128> convolve(const ResidueRing& ring, std::span<const u128> a, std::span<const u128> b,
                           std::size_t out_len);

} // namespace mockpadic::ntt
