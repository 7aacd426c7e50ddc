#pragma once

#include <vector>

#include "wlab/common.hpp"

namespace wlab {

// Number-theoretic transforms modulo two 62-bit primes with CRT
// reconstruction, so integer convolutions are certified exact as long
// as every output value stays below p1*p2 (~2^123).

inline constexpr u64 ntt_prime1 = 4179340454199820289ull;  // 29*2^57 + 1, root 3
inline constexpr u64 ntt_prime2 = 2485986994308513793ull;  // 69*2^55 + 1, root 5

// In-place NTT of power-of-two length over Z/p. invert=true applies the
// inverse transform including the 1/n factor.
void ntt_pow2(std::vector<u64>& a, u64 p, u64 root, bool invert);

// Exact linear convolution of nonnegative integer sequences. Every output
// coefficient must be < 2^64 (checked via CRT; throws capacity_error).
std::vector<u64> convolve_exact(const std::vector<u64>& a, const std::vector<u64>& b);

// CRT lift of (r1 mod p1, r2 mod p2) to the unique residue mod p1*p2,
// returned as u128.
u128 crt_pair(u64 r1, u64 r2);

}  // namespace wlab
