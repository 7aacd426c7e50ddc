#pragma once

#include <optional>
#include <vector>

#include "wlab/common.hpp"

namespace wlab {

// One Euler factor sigma_p of the singular series: the p-adic density
// lim_h p^{-h(s+1)} #{x1^2+x2^2+y1^4+...+ys^4 = n mod p^h}.
struct LocalFactor {
    u64 p = 0;
    double sigma_p = 0.0;
    int h_used = 0;
    bool stabilized = false;
};

enum class SingularMethod { QSum, Euler };

struct SingularSeriesResult {
    int s = 0;
    u64 n = 0;
    double value = 0.0;
    SingularMethod method = SingularMethod::QSum;
    u64 q_max = 0;  // QSum truncation
    u64 p_max = 0;  // Euler truncation
    int h_max = 0;  // Euler lifting cap for p = 2 (odd p capped at 4)
    double tail_estimate = 0.0;
    std::vector<LocalFactor> local_factors;  // Euler only
};

struct MainTermResult {
    int s = 0;
    u64 n = 0;
    SingularSeriesResult singular_series;
    double main_term = 0.0;
    double constant_c = 0.0;    // c3 = (2/3) sqrt 2, c4 = pi/4
    double gamma54_pow4 = 0.0;  // Gamma(5/4)^4
};

// Gamma(5/4)^4, frozen to 17 significant digits. First use runs a one-time
// self-check against a quadrature evaluation of the Euler integral (1e-12).
double gamma54_pow4();

// Independent quadrature evaluation of Gamma(5/4) (test oracle; also backs
// the startup self-check).
double gamma54_by_quadrature();

double c_s_constant(int s);

// A(q,n) = sum over a coprime to q of q^{-2-s} S_2(q,a)^2 S_4(q,a)^s e(-na/q).
// Multiplicative in q; assembled from prime-power blocks. The imaginary part
// of every assembled block must vanish to 1e-8 (a <-> q-a pairing) or an
// integrity_error is raised. Returns the real part.
double a_term(int s, u64 n, u64 q);

// Truncated q-sum for the singular series, sum_{q <= q_max} A(q,n), plus a
// tail estimate C * q_max^{-s/4} with C the observed max of |A(q,n)| q^{1+s/4}.
SingularSeriesResult singular_series_qsum(int s, u64 n, u64 q_max);

// sigma_p two ways: (a) partial sums of A(p^h, n); (b) solution counting from
// square / fourth-power residue histograms mod p^h. The depth is adaptive:
// odd p stop once consecutive counting densities agree to 1e-6 relative
// (sound: the deeper corrections vanish exactly), while p = 2 treats h_max as
// a floor and keeps lifting until the density settles, since the 2-adic
// settle depth grows with v_2(n). Raises integrity_error if the two routes
// disagree at the deepest level computed.
LocalFactor local_density(int s, u64 n, u64 p, int h_max);

// Product of local densities over p <= p_max. Non-stabilized factors are
// reported through their LocalFactor entries, not raised.
SingularSeriesResult singular_series_euler(int s, u64 n, u64 p_max, int h_max);

MainTermResult main_term(int s, u64 n, const SingularSeriesResult& ss);

// Dense evaluation tables for scan workloads: per modulus q <= q_max the array
// A_q[m] = A(q, m), m mod q, so one singular-series evaluation is a sum of
// q_max lookups. Read-only after construction, safe to share across threads.
class SingularScanTable {
  public:
    SingularScanTable(int s, u64 q_max);
    int s() const { return s_; }
    u64 q_max() const { return q_max_; }
    // truncated singular series at n; if tail is non-null also reports the
    // envelope-based tail estimate for this n
    double evaluate(u64 n, double* tail = nullptr) const;

  private:
    int s_;
    u64 q_max_;
    std::vector<std::vector<double>> a_mod_;  // [q] -> length-q array
    std::vector<double> env_weight_;          // q^{1+s/4}, for the tail envelope
};

// Drops all memoized Gauss-sum product tables (tests and memory control).
void clear_singular_caches();

}  // namespace wlab
