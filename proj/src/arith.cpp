#include "wlab/arith.hpp"

#include <algorithm>
#include <cmath>

namespace wlab {

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) {
        d >>= 1;
        ++s;
    }
    // deterministic for n < 3.3e24 with this base set
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

static u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    u64 x0 = 2, c = 1;
    for (;;) {
        u64 x = x0, y = x0, d = 1;
        u64 ys = 0, q = 1;
        int r = 1;
        const int m = 128;
        while (d == 1) {
            x = y;
            for (int i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            for (int k = 0; k < r && d == 1; k += m) {
                ys = y;
                int lim = std::min(m, r - k);
                for (int i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = gcd_u64(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = (mulmod(ys, ys, n) + c) % n;
                d = gcd_u64(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
        ++c;  // rare cycle degeneracy, retry with another polynomial
        x0 += 1;
    }
}

static void factor_rec(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        primes.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

FactoredInteger factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    FactoredInteger out;
    out.value = n;
    std::vector<u64> primes;
    for (u64 p : {2ull, 3ull, 5ull}) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    u64 p = 7;
    int wi = 0;
    while (p <= 1000000 && p * p <= n) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
        p += wheel[wi];
        wi = (wi + 1) & 7;
    }
    if (n > 1) factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    for (u64 q : primes) {
        if (!out.factors.empty() && out.factors.back().prime == q)
            out.factors.back().exponent += 1;
        else
            out.factors.push_back({q, 1});
    }
    return out;
}

int jacobi(i64 a, u64 q) {
    if (q == 0 || q % 2 == 0) throw std::invalid_argument("jacobi: modulus must be odd and positive");
    u64 n = q;
    u64 x = (u64)(((a % (i64)n) + (i64)n) % (i64)n);
    int t = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            u64 r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(x, n);
        if ((x & 3) == 3 && (n & 3) == 3) t = -t;
        x %= n;
    }
    return n == 1 ? t : 0;
}

GaussSumValue gauss_sum_direct(int k, u64 q, u64 a) {
    if (k != 2 && k != 4) throw std::invalid_argument("gauss_sum_direct: k must be 2 or 4");
    if (q == 0 || q > 1000000) throw std::invalid_argument("gauss_sum_direct: need 1 <= q <= 1e6");
    if (gcd_u64(a % q == 0 ? q : a % q, q) != 1 && q != 1)
        throw std::invalid_argument("gauss_sum_direct: gcd(a,q) must be 1");
    const u64 am = a % q;
    cplx sum(0.0, 0.0);
    for (u64 r = 1; r <= q; ++r) {
        u64 rk = mulmod(r, r, q);
        if (k == 4) rk = mulmod(rk, rk, q);
        sum += unit_root(mulmod(am, rk, q), q);
    }
    return {k, q, a, sum, GaussMethod::Direct};
}

// S_2(2^m, a), a odd: 0 for m=1; 2^{m/2}(1+i^a) for even m; 2^{(m+1)/2} e(a/8)
// for odd m > 1. e(a/8) is table-driven on a mod 8.
static cplx s2_two_power(int m, u64 a) {
    if (m == 0) return {1.0, 0.0};
    if (m == 1) return {0.0, 0.0};
    static const double rh = 0.7071067811865475244008443621048490;  // 1/sqrt(2)
    static const cplx eighth[8] = {{1, 0}, {rh, rh}, {0, 1}, {-rh, rh}, {-1, 0}, {-rh, -rh}, {0, -1}, {rh, -rh}};
    if (m % 2 == 0) {
        cplx ia = (a % 4 == 1) ? cplx(0, 1) : cplx(0, -1);
        return std::pow(2.0, m / 2) * (cplx(1, 0) + ia);
    }
    return std::pow(2.0, (m + 1) / 2.0) * eighth[a % 8];
}

// S_2(q,1) for odd q: sqrt(q) if q = 1 mod 4, i sqrt(q) if q = 3 mod 4.
static cplx s2_odd_unit(u64 q) {
    double rq = std::sqrt((double)q);
    return (q % 4 == 1) ? cplx(rq, 0.0) : cplx(0.0, rq);
}

u64 inv_mod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = (i64)m, nr = (i64)(a % m);
    while (nr != 0) {
        i64 qq = r / nr;
        std::swap(t -= qq * nt, nt);
        std::swap(r -= qq * nr, nr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: not invertible");
    return (u64)(t < 0 ? t + (i64)m : t);
}

GaussSumValue gauss_sum_s2_closed(u64 q, u64 a) {
    if (q == 0) throw std::invalid_argument("gauss_sum_s2_closed: q must be positive");
    u64 am = a % q;
    if (q == 1) return {2, q, a, {1.0, 0.0}, GaussMethod::ClosedForm};
    if (gcd_u64(am, q) != 1) throw std::invalid_argument("gauss_sum_s2_closed: gcd(a,q) must be 1");
    int m = 0;
    u64 q_odd = q;
    while ((q_odd & 1) == 0) {
        q_odd >>= 1;
        ++m;
    }
    cplx val;
    if (m == 0) {
        val = (double)jacobi((i64)am, q) * s2_odd_unit(q);
    } else if (q_odd == 1) {
        val = s2_two_power(m, am);
    } else {
        // q = q1*q2 with q1 = 2^m, q2 odd: a = a1*q2 + a2*q1 (mod q) gives
        // S_2(q,a) = S_2(q1,a1) S_2(q2,a2). Residues normalized to 1..qi.
        u64 q1 = q / q_odd, q2 = q_odd;
        u64 a1 = mulmod(am % q1, inv_mod(q2 % q1, q1), q1);
        u64 a2 = mulmod(am % q2, inv_mod(q1 % q2, q2), q2);
        if (a1 == 0) a1 = q1;
        if (a2 == 0) a2 = q2;
        cplx odd_part = (double)jacobi((i64)a2, q2) * s2_odd_unit(q2);
        val = s2_two_power(m, a1) * odd_part;
    }
    return {2, q, a, val, GaussMethod::ClosedForm};
}

double weight_w(int k, u64 q) {
    if (k != 2 && k != 4) throw std::invalid_argument("weight_w: k must be 2 or 4");
    if (q == 0) throw std::invalid_argument("weight_w: q must be positive");
    double w = 1.0;
    for (const auto& [p, e] : factorize(q).factors) {
        int u = (e - 1) / k;
        int v = e - u * k;  // 1 <= v <= k
        if (v == 1)
            w *= k * std::pow((double)p, -u - 0.5);
        else
            w *= std::pow((double)p, -u - 1.0);
    }
    return w;
}

}  // namespace wlab
