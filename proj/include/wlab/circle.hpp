#pragma once

#include <optional>
#include <vector>

#include "wlab/arith.hpp"
#include "wlab/common.hpp"

namespace wlab {

// Arc geometry: P2 = X^{1/2}, P4 = X^{1/4}, R = P4^nu, Y = P4^{3/2+tau} psi(X)^2.
// Construction enforces 1 <= R <= P4 <= Y <= X^{1/2}/2 so the major-arc
// families M(R) c M(P4) c M(Y) c M(X^{1/2}/2) are nested.
struct DissectionParams {
    double x = 0;
    double nu = 0;
    double tau = 0;
    double psi_at_x = 0;
    double p2 = 0, p4 = 0, r = 0, y = 0;
    DissectionParams(double x_, double nu_, double tau_, double psi_at_x_);
};

enum class MajorLevel { R, P4, Y, HalfSqrtX };

// Minor-arc strata, by the level of the narrowest major-arc family containing
// the point: m4 inside M(P4)\M(R), m3 inside M(Y)\M(P4), m2 inside
// M(X^{1/2}/2)\M(Y), m1 outside all of them.
enum class MinorStratum { m1, m2, m3, m4 };

struct ArcLabel {
    bool is_major = false;
    MajorLevel level = MajorLevel::R;         // when major
    ReducedFraction frac;                     // when major
    MinorStratum stratum = MinorStratum::m1;  // when minor
};

struct WeylSumSample {
    double alpha = 0;
    int k = 0;
    cplx value;
    std::optional<cplx> f_star;
    ArcLabel arc;
};

// f_k(alpha) = sum_{1 <= x <= X^{1/k}} e(alpha x^k). The phase alpha*x^k is
// reduced mod 1 through a two-term product so no accuracy is lost even when
// the product exceeds 2^53.
cplx weyl_sum(int k, double x, double alpha);

// v_k(beta) = int_0^{P_k} e(beta g^k) dg by composite Gauss-Legendre panels,
// at least 20 panels per oscillation, verified by panel doubling (throws
// integrity_error when doubling moves the value by more than 1e-8 P_k).
cplx v_integral(int k, double x, double beta);

// Major-arc approximant q^{-1} S_k(q,a) v_k(alpha - a/q). alpha must lie in
// the level-X^{1/2}/2 window of frac.
cplx f_star(int k, double x, ReducedFraction frac, double alpha);

// Continued-fraction convergents a/q of alpha with q <= q_limit and a >= 1.
std::vector<ReducedFraction> convergents(double alpha, double q_limit);

// Best rational window at level Q: a convergent with q <= Q and
// |q alpha - a| <= Q/X, if one exists (they are unique for Q <= X^{1/2}/2).
std::optional<ReducedFraction> find_major_window(double alpha, double x, double level_q);

// Total classifier over (R/X, 1 + R/X] (alpha is translated into that window
// by an integer shift; the unit-interval convention is N = X).
ArcLabel classify_arc(double alpha, const DissectionParams& params);

WeylSumSample sample_weyl(int k, const DissectionParams& params, double alpha);

// Exact count of 2m-tuples in [1,P]^{2m} with equal m-fold sums of k-th
// powers; equals the integral of |f_k|^{2m} over the unit interval.
u64 moment_count(int k, int m, u64 big_p);

struct OrthogonalityReport {
    int s = 0;
    u64 x = 0;
    std::size_t grid = 0;
    double max_abs_deviation = 0;
    bool pass = false;
};

// Evaluates f_2^2 f_4^s on a power-of-two grid finer than the degree of the
// trigonometric polynomial, inverse-transforms, and compares coefficient n
// with the sieve count R_s(n) for every n <= x.
OrthogonalityReport verify_orthogonality(int s, u64 x);

struct SupDiagnosticReport {
    std::size_t samples = 0;
    std::size_t m1_hits = 0;
    double max_ratio = 0;       // max |f_2(alpha)| / P_2^{1/2} over m1 points
    double mean_ratio = 0;
};

SupDiagnosticReport minor_arc_sup_diagnostic(const DissectionParams& params, std::size_t samples,
                                             u64 seed = 0x5eed);

}  // namespace wlab
