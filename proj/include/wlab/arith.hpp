#pragma once

#include <vector>

#include "wlab/common.hpp"

namespace wlab {

struct PrimePower {
    u64 prime;
    int exponent;
};

// value = product of prime^exponent, primes strictly increasing.
struct FactoredInteger {
    u64 value = 1;
    std::vector<PrimePower> factors;
};

enum class GaussMethod { Direct, ClosedForm };

// S_k(q,a) = sum_{r=1..q} e(a r^k / q) for k in {2,4}, gcd(a,q)=1.
struct GaussSumValue {
    int k;
    u64 q;
    u64 a;
    cplx value;
    GaussMethod method;
};

// a/q with gcd(a,q)=1 and 1 <= a <= q.
struct ReducedFraction {
    u64 a = 1;
    u64 q = 1;
};

bool is_prime_u64(u64 n);

// Total on [1, 2^63]: trial division to 1e6, then Miller-Rabin + Pollard-Brent.
FactoredInteger factorize(u64 n);

// Jacobi symbol (a/q), q odd positive. 0 iff gcd(a,q) > 1.
int jacobi(i64 a, u64 q);

// Gauss sum by O(q) summation, r^k reduced mod q in integer arithmetic.
// Requires gcd(a,q)=1 and q <= 1e6.
GaussSumValue gauss_sum_direct(int k, u64 q, u64 a);

// S_2(q,a) without any O(q) summation: split q = 2^m * q_odd, invert the CRT
// twist, evaluate the odd part by Jacobi symbol times S_2(q_odd,1) and the
// 2-power part by its three-case closed form.
GaussSumValue gauss_sum_s2_closed(u64 q, u64 a);

// Multiplicative weight: w_k(p^(uk+v)) = k p^(-u-1/2) if v=1, else p^(-u-1),
// for 1 <= v <= k. Dominates |q^{-1} S_k(q,a)| and satisfies w_k(q) >= q^{-1/2}.
double weight_w(int k, u64 q);

// Extended gcd inverse: x with x*a == 1 (mod m), gcd(a,m)=1.
u64 inv_mod(u64 a, u64 m);

}  // namespace wlab
