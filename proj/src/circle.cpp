#include "wlab/circle.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

#include "wlab/fft.hpp"
#include "wlab/repcount.hpp"

namespace wlab {

DissectionParams::DissectionParams(double x_, double nu_, double tau_, double psi_at_x_)
    : x(x_), nu(nu_), tau(tau_), psi_at_x(psi_at_x_) {
    if (!(x > 16.0)) throw std::invalid_argument("DissectionParams: x must exceed 16");
    if (!(nu > 0) || !(tau > 0) || !(psi_at_x > 0))
        throw std::invalid_argument("DissectionParams: nu, tau, psi must be positive");
    p2 = std::sqrt(x);
    p4 = std::sqrt(p2);
    r = std::pow(p4, nu);
    y = std::pow(p4, 1.5 + tau) * psi_at_x * psi_at_x;
    if (!(1.0 <= r && r <= p4 && p4 <= y && y <= p2 / 2.0))
        throw std::invalid_argument("DissectionParams: need 1 <= R <= P4 <= Y <= sqrt(X)/2");
}

// ---------------------------------------------------------------------------
// Weyl sums
// ---------------------------------------------------------------------------

namespace {

u64 terms_for(int k, double x) {
    if (k == 2) return isqrt((u64)x);
    if (k == 4) return iroot4((u64)x);
    throw std::invalid_argument("k must be 2 or 4");
}

// frac(a*b) with the product split exactly into hi + lo via fma
inline double frac_prod(double a, double b) {
    double hi = a * b;
    double lo = std::fma(a, b, -hi);
    double f = hi - std::floor(hi);
    double ph = f + lo;
    ph -= std::floor(ph);
    return ph;
}

}  // namespace

cplx weyl_sum(int k, double x, double alpha) {
    if (!(x >= 1)) throw std::invalid_argument("weyl_sum: x must be >= 1");
    if (k == 2 && x > 1e9) throw capacity_error("weyl_sum: x above 1e9 for k=2");
    if (k == 4 && x > 1e18) throw capacity_error("weyl_sum: x above 1e18 for k=4");
    const u64 pk = terms_for(k, x);
    cplx sum(0.0, 0.0);
    for (u64 xi = 1; xi <= pk; ++xi) {
        double xk = (double)(xi * xi);
        if (k == 4) xk *= xk;
        sum += unit(frac_prod(alpha, xk));
    }
    return sum;
}

// ---------------------------------------------------------------------------
// oscillatory integral v_k
// ---------------------------------------------------------------------------

namespace {

const double gl8_x[8] = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                         0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                         0.8983332387068134, 0.9801449282487681};
const double gl8_w[8] = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                         0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                         0.1111905172266872, 0.0506142681451881};

cplx v_quad(int k, double pk, double beta, u64 panels) {
    cplx acc(0.0, 0.0);
    const double h = pk / (double)panels;
    for (u64 j = 0; j < panels; ++j) {
        double a = h * (double)j;
        cplx panel(0.0, 0.0);
        for (int i = 0; i < 8; ++i) {
            double g = a + h * gl8_x[i];
            double gk = g * g;
            if (k == 4) gk *= gk;
            panel += gl8_w[i] * unit(beta * gk);
        }
        acc += panel * h;
    }
    return acc;
}

}  // namespace

cplx v_integral(int k, double x, double beta) {
    if (k != 2 && k != 4) throw std::invalid_argument("v_integral: k must be 2 or 4");
    if (std::fabs(beta) > 1.0) throw std::invalid_argument("v_integral: |beta| must be <= 1");
    const double pk = std::pow(x, 1.0 / k);
    const double osc = 1.0 + x * std::fabs(beta);
    if (osc > 1e6) throw capacity_error("v_integral: X|beta| too large for quadrature");
    u64 panels = (u64)std::ceil(20.0 * osc);
    if (panels < 32) panels = 32;
    cplx coarse = v_quad(k, pk, beta, panels);
    cplx fine = v_quad(k, pk, beta, 2 * panels);
    if (std::abs(fine - coarse) > 1e-8 * pk)
        throw integrity_error("v_integral: panel doubling did not converge");
    return fine;
}

cplx f_star(int k, double x, ReducedFraction frac, double alpha) {
    const double window = 0.5 / std::sqrt(x);  // |q alpha - a| <= (sqrt(X)/2)/X
    double qa_hi = alpha * (double)frac.q;
    double qa_lo = std::fma(alpha, (double)frac.q, -qa_hi);
    double dev = (qa_hi - (double)frac.a) + qa_lo;
    if (std::fabs(dev) > window)
        throw std::invalid_argument("f_star: alpha outside the level-sqrt(X)/2 window of a/q");
    const double beta = dev / (double)frac.q;
    cplx s = (k == 2) ? gauss_sum_s2_closed(frac.q, frac.a).value
                      : gauss_sum_direct(4, frac.q, frac.a).value;
    return s / (double)frac.q * v_integral(k, x, beta);
}

// ---------------------------------------------------------------------------
// arc dissection
// ---------------------------------------------------------------------------

std::vector<ReducedFraction> convergents(double alpha, double q_limit) {
    std::vector<ReducedFraction> out;
    double xi = alpha;
    u64 p_prev = 1, p_prev2 = 0;
    u64 q_prev = 0, q_prev2 = 1;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(xi);
        if (fl < 0 || fl > 9e18) break;
        u64 ai = (u64)fl;
        if (iter > 0 && ai > (1ull << 32)) break;  // q would dwarf any usable window
        u64 p = ai * p_prev + p_prev2;
        u64 q = ai * q_prev + q_prev2;
        if (q > (u64)q_limit || q == 0) break;
        if (p >= 1 && p <= q) out.push_back({p, q});
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
        double rem = xi - fl;
        if (rem < 1e-15) break;
        xi = 1.0 / rem;
    }
    return out;
}

std::optional<ReducedFraction> find_major_window(double alpha, double x, double level_q) {
    std::optional<ReducedFraction> best;
    for (const auto& f : convergents(alpha, level_q)) {
        if ((double)f.q > level_q) continue;
        double dev = std::fabs((double)f.q * alpha - (double)f.a);
        if (dev <= level_q / x) {
            if (!best || f.q < best->q) best = f;
        }
    }
    return best;
}

ArcLabel classify_arc(double alpha, const DissectionParams& params) {
    const double x = params.x;
    // translate into (R/X, 1 + R/X]
    double a0 = alpha - std::floor(alpha);
    if (a0 <= params.r / x) a0 += 1.0;

    ArcLabel label;
    if (auto w = find_major_window(a0, x, params.r)) {
        label.is_major = true;
        label.level = MajorLevel::R;
        label.frac = *w;
        return label;
    }
    label.is_major = false;
    if (auto w = find_major_window(a0, x, params.p4)) {
        label.stratum = MinorStratum::m4;
        label.frac = *w;
    } else if (auto w = find_major_window(a0, x, params.y)) {
        label.stratum = MinorStratum::m3;
        label.frac = *w;
    } else if (auto w = find_major_window(a0, x, params.p2 / 2.0)) {
        label.stratum = MinorStratum::m2;
        label.frac = *w;
    } else {
        label.stratum = MinorStratum::m1;
    }
    return label;
}

WeylSumSample sample_weyl(int k, const DissectionParams& params, double alpha) {
    WeylSumSample s;
    s.alpha = alpha;
    s.k = k;
    s.arc = classify_arc(alpha, params);
    s.value = weyl_sum(k, params.x, alpha);
    if (s.arc.is_major) s.f_star = f_star(k, params.x, s.arc.frac, alpha);
    return s;
}

// ---------------------------------------------------------------------------
// moments as exact counts
// ---------------------------------------------------------------------------

u64 moment_count(int k, int m, u64 big_p) {
    if (k != 2 && k != 4) throw std::invalid_argument("moment_count: k must be 2 or 4");
    if (m < 1 || m > 4) throw std::invalid_argument("moment_count: m must be in 1..4");
    if (big_p < 1 || big_p > 200) throw std::invalid_argument("moment_count: P must be in 1..200");
    u64 pk_max = big_p * big_p;
    if (k == 4) pk_max *= pk_max;
    const u64 range = (u64)m * pk_max + 1;
    if (range <= 20000000ull) {
        // dense histogram of m-fold sums, built by iterated shift-adds
        std::vector<u64> hist(range, 0);
        hist[0] = 1;
        u64 reach = 0;
        for (int fold = 0; fold < m; ++fold) {
            std::vector<u64> next(range, 0);
            for (u64 t = 0; t <= reach; ++t) {
                if (!hist[t]) continue;
                for (u64 xv = 1; xv <= big_p; ++xv) {
                    u64 xk = xv * xv;
                    if (k == 4) xk *= xk;
                    next[t + xk] += hist[t];
                }
            }
            hist.swap(next);
            reach += pk_max;
        }
        u64 total = 0;
        for (u64 t = 0; t < range; ++t) total += hist[t] * hist[t];
        return total;
    }
    // sparse hash-join over enumerated m-fold sums
    double tuples = std::pow((double)big_p, m);
    if (tuples > 3.2e7) throw capacity_error("moment_count: P^m too large for the hash-join");
    std::unordered_map<u64, u64> sums;
    sums.reserve((std::size_t)std::min(tuples, 1.7e7));
    std::vector<u64> powers(big_p + 1);
    for (u64 xv = 1; xv <= big_p; ++xv) {
        u64 xk = xv * xv;
        if (k == 4) xk *= xk;
        powers[xv] = xk;
    }
    std::vector<u64> idx(m, 1);
    for (;;) {
        u64 t = 0;
        for (int i = 0; i < m; ++i) t += powers[idx[i]];
        sums[t] += 1;
        int pos = m - 1;
        while (pos >= 0 && ++idx[pos] > big_p) {
            idx[pos] = 1;
            --pos;
        }
        if (pos < 0) break;
    }
    u64 total = 0;
    for (const auto& [t, c] : sums) total += c * c;
    return total;
}

// ---------------------------------------------------------------------------
// orthogonality check
// ---------------------------------------------------------------------------

OrthogonalityReport verify_orthogonality(int s, u64 x) {
    if (s != 3 && s != 4) throw std::invalid_argument("verify_orthogonality: s must be 3 or 4");
    if (x < 8 || x > 512) throw std::invalid_argument("verify_orthogonality: x must be in [8, 512]");
    const u64 degree = (u64)(s + 2) * x + 1;
    std::size_t n_grid = 1;
    while (n_grid <= degree) n_grid <<= 1;

    // exact integer phases on the grid: e((x^k j) mod N / N)
    std::vector<cplx> roots(n_grid);
    for (std::size_t r = 0; r < n_grid; ++r) roots[r] = unit_root(r, n_grid);
    const u64 p2 = isqrt(x), p4 = iroot4(x);
    std::vector<cplx> grid(n_grid);
    for (std::size_t j = 0; j < n_grid; ++j) {
        cplx f2(0, 0), f4(0, 0);
        for (u64 xv = 1; xv <= p2; ++xv) f2 += roots[(xv * xv * j) % n_grid];
        for (u64 xv = 1; xv <= p4; ++xv) f4 += roots[(xv * xv * xv * xv * j) % n_grid];
        cplx f4s = f4 * f4 * f4;
        if (s == 4) f4s *= f4;
        grid[j] = f2 * f2 * f4s;
    }
    fft_pow2(grid, -1);  // coefficient n = (1/N) sum_j grid[j] e(-nj/N)

    auto table = sieve_representations(s, x, SieveStrategy::Direct);
    OrthogonalityReport rep;
    rep.s = s;
    rep.x = x;
    rep.grid = n_grid;
    const double inv_n = 1.0 / (double)n_grid;
    for (u64 n = 1; n <= x; ++n) {
        cplx coef = grid[n] * inv_n;
        double dev = std::max(std::fabs(coef.real() - (double)table.counts[n]), std::fabs(coef.imag()));
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
    }
    rep.pass = rep.max_abs_deviation < 1e-6;
    return rep;
}

SupDiagnosticReport minor_arc_sup_diagnostic(const DissectionParams& params, std::size_t samples, u64 seed) {
    SupDiagnosticReport rep;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(std::nextafter(params.r / params.x, 1.0),
                                               1.0 + params.r / params.x);
    const double norm = std::sqrt(params.p2);
    double sum_ratio = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        double alpha = uni(rng);
        ArcLabel lab = classify_arc(alpha, params);
        if (lab.is_major || lab.stratum != MinorStratum::m1) continue;
        double ratio = std::abs(weyl_sum(2, params.x, alpha)) / norm;
        rep.m1_hits += 1;
        sum_ratio += ratio;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    rep.mean_ratio = rep.m1_hits ? sum_ratio / (double)rep.m1_hits : 0.0;
    return rep;
}

}  // namespace wlab
