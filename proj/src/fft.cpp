#include "wlab/fft.hpp"

#include <cmath>
#include <cstddef>

namespace wlab {

void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * two_pi / (double)len;
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

static std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<cplx> dft_any(const std::vector<cplx>& in, int sign) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        std::vector<cplx> a = in;
        fft_pow2(a, sign);
        return a;
    }
    // Bluestein: j*m = (j^2 + m^2 - (m-j)^2)/2, so the DFT becomes a linear
    // convolution against the chirp e(-sign * t^2 / (2n)). t^2 mod 2n is taken
    // exactly so the half-integer phases stay accurate for large n.
    const std::size_t m = next_pow2(2 * n - 1);
    auto chirp = [&](u64 t) -> cplx {
        u64 t2 = mulmod(t, t, 2 * (u64)n);
        double ang = sign * two_pi * 0.5 * ((double)t2 / (double)n);
        return {std::cos(ang), std::sin(ang)};
    };
    std::vector<cplx> a(m, cplx(0, 0)), b(m, cplx(0, 0));
    for (std::size_t j = 0; j < n; ++j) a[j] = in[j] * chirp(j);
    for (std::size_t j = 0; j < n; ++j) {
        cplx c = std::conj(chirp(j));
        b[j] = c;
        if (j) b[m - j] = c;
    }
    fft_pow2(a, -1);
    fft_pow2(b, -1);
    for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
    fft_pow2(a, +1);
    const double inv_m = 1.0 / (double)m;
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * inv_m * chirp(k);
    return out;
}

std::vector<double> cyclic_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    std::vector<cplx> fa(n), fb(n);
    for (std::size_t i = 0; i < n; ++i) fa[i] = cplx(a[i], 0.0);
    for (std::size_t i = 0; i < n; ++i) fb[i] = cplx(b[i], 0.0);
    fa = dft_any(fa, -1);
    fb = dft_any(fb, -1);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fa = dft_any(fa, +1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fa[i].real() / (double)n;
    return out;
}

}  // namespace wlab
