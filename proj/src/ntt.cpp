#include "wlab/ntt.hpp"

namespace wlab {

void ntt_pow2(std::vector<u64>& a, u64 p, u64 root, bool invert) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (n & (n - 1)) throw std::invalid_argument("ntt_pow2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 wlen = powmod(root, (p - 1) / len, p);
        if (invert) wlen = powmod(wlen, p - 2, p);
        for (std::size_t i = 0; i < n; i += len) {
            u64 w = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                u64 u = a[i + j];
                u64 v = mulmod(a[i + j + len / 2], w, p);
                a[i + j] = u + v < p ? u + v : u + v - p;
                a[i + j + len / 2] = u >= v ? u - v : u + p - v;
                w = mulmod(w, wlen, p);
            }
        }
    }
    if (invert) {
        u64 n_inv = powmod((u64)n, p - 2, p);
        for (auto& x : a) x = mulmod(x, n_inv, p);
    }
}

u128 crt_pair(u64 r1, u64 r2) {
    // x = r1 + p1 * ((r2 - r1) * p1^{-1} mod p2)
    static const u64 p1_inv_p2 = powmod(ntt_prime1 % ntt_prime2, ntt_prime2 - 2, ntt_prime2);
    u64 d = r2 >= r1 % ntt_prime2 ? r2 - r1 % ntt_prime2 : r2 + ntt_prime2 - r1 % ntt_prime2;
    u64 t = mulmod(d, p1_inv_p2, ntt_prime2);
    return (u128)r1 + (u128)ntt_prime1 * t;
}

static std::vector<u64> convolve_mod(const std::vector<u64>& a, const std::vector<u64>& b, u64 p, u64 root) {
    std::size_t need = a.size() + b.size() - 1;
    std::size_t n = 1;
    while (n < need) n <<= 1;
    std::vector<u64> fa(n, 0), fb(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] % p;
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i] % p;
    ntt_pow2(fa, p, root, false);
    ntt_pow2(fb, p, root, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] = mulmod(fa[i], fb[i], p);
    ntt_pow2(fa, p, root, true);
    fa.resize(need);
    return fa;
}

std::vector<u64> convolve_exact(const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.empty() || b.empty()) return {};
    auto c1 = convolve_mod(a, b, ntt_prime1, 3);
    auto c2 = convolve_mod(a, b, ntt_prime2, 5);
    std::vector<u64> out(c1.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        u128 v = crt_pair(c1[i], c2[i]);
        if (v >> 64) throw capacity_error("convolve_exact: coefficient exceeds 64 bits");
        out[i] = (u64)v;
    }
    return out;
}

}  // namespace wlab
