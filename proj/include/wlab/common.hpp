#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wlab {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using cplx = std::complex<double>;

// A numerical self-check failed (e.g. a quantity that must be real came out
// with a non-negligible imaginary part). CLI maps this to exit code 2.
class integrity_error : public std::runtime_error {
  public:
    explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

// A count or table would exceed its cell width / memory budget. Exit code 3.
class capacity_error : public std::runtime_error {
  public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double two_pi = 6.283185307179586476925286766559;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// floor(sqrt(n)) exactly, for any 64-bit n
inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = (u64)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// floor(n^(1/4)) exactly
inline u64 iroot4(u64 n) {
    u64 r = (u64)std::pow((double)n, 0.25);
    while (r > 0 && r * r * r * r > n) --r;
    while ((r + 1) * (r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

// e(num/den) = exp(2*pi*i*num/den) with the fraction reduced mod den exactly
// before the transcendental call, so rational phases cost no precision.
inline cplx unit_root(u64 num, u64 den) {
    num %= den;
    double t = two_pi * ((double)num / (double)den);
    return {std::cos(t), std::sin(t)};
}

// e(t) for real t
inline cplx unit(double t) {
    double a = two_pi * t;
    return {std::cos(a), std::sin(a)};
}

}  // namespace wlab
