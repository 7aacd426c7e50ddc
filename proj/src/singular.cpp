#include "wlab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>

#include "wlab/arith.hpp"
#include "wlab/fft.hpp"

namespace wlab {

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

// Gamma(5/4)^4; see gamma54_by_quadrature for the independent evaluation.
static constexpr double k_gamma54_pow4 = 0.67496978931117301;

double gamma54_by_quadrature() {
    // Gamma(5/4) = int_0^inf t^{1/4} e^{-t} dt. On [0,1] substitute t = u^4
    // (removes the fractional-power derivative blowup at 0), on [1,50] the
    // integrand is smooth; the remainder beyond 50 is < 1e-18.
    static const double gl_x[8] = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                                   0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                                   0.8983332387068134, 0.9801449282487681};
    static const double gl_w[8] = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                                   0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                                   0.1111905172266872, 0.0506142681451881};
    auto panel = [&](double a, double b, auto&& f) {
        double h = b - a, acc = 0.0;
        for (int i = 0; i < 8; ++i) acc += gl_w[i] * f(a + h * gl_x[i]);
        return acc * h;
    };
    double head = 0.0;
    for (int j = 0; j < 16; ++j) {
        double a = j / 16.0, b = (j + 1) / 16.0;
        head += panel(a, b, [](double u) { return 4.0 * u * u * u * u * std::exp(-u * u * u * u); });
    }
    double tail = 0.0;
    for (int j = 0; j < 98; ++j) {
        double a = 1.0 + 0.5 * j, b = 1.0 + 0.5 * (j + 1);
        tail += panel(a, b, [](double t) { return std::pow(t, 0.25) * std::exp(-t); });
    }
    return head + tail;
}

double gamma54_pow4() {
    static std::once_flag once;
    std::call_once(once, [] {
        double g = gamma54_by_quadrature();
        double g4 = g * g * g * g;
        if (std::fabs(g4 - k_gamma54_pow4) > 1e-12 * k_gamma54_pow4)
            throw integrity_error("gamma54_pow4: frozen constant fails quadrature self-check");
    });
    return k_gamma54_pow4;
}

double c_s_constant(int s) {
    if (s == 3) return 2.0 / 3.0 * std::sqrt(2.0);
    if (s == 4) return 0.78539816339744830961566084581988;  // pi/4
    throw std::invalid_argument("c_s_constant: s must be 3 or 4");
}

// ---------------------------------------------------------------------------
// Gauss-sum product tables
//
// For a prime power q the engine needs S_2(q,a)^2 S_4(q,a)^s for every unit
// a mod q. S_2 comes from its closed form. S_4 comes from one length-q DFT of
// the fourth-power residue histogram: S_4(q,a) = sum_t #{r : r^4 = t} e(at/q).
// ---------------------------------------------------------------------------

namespace {

constexpr u64 k_table_cache_cap = 1ull << 16;  // largest q whose tables are memoized
constexpr u64 k_generic_cap = 1ull << 20;      // largest q evaluated through tables at all
constexpr u64 k_count_feasible = 3500000;      // largest modulus for density counting
constexpr double k_imag_tol = 1e-8;

std::vector<cplx> s4_table_compute(u64 q) {
    std::vector<cplx> hist(q, cplx(0, 0));
    for (u64 r = 0; r < q; ++r) {
        u64 r2 = mulmod(r, r, q);
        hist[mulmod(r2, r2, q)] += 1.0;
    }
    return dft_any(hist, +1);
}

// Optional on-disk memo of S_4 tables, controlled by WLAB_CACHE_DIR.
std::vector<cplx> s4_table(u64 q) {
    const char* dir = std::getenv("WLAB_CACHE_DIR");
    if (dir == nullptr || q < 512) return s4_table_compute(q);
    std::string path = std::string(dir) + "/s4_" + std::to_string(q) + ".bin";
    {
        std::ifstream is(path, std::ios::binary);
        if (is) {
            char magic[4];
            u64 qq = 0;
            is.read(magic, 4);
            is.read((char*)&qq, 8);
            if (is && std::memcmp(magic, "WLS4", 4) == 0 && qq == q) {
                std::vector<cplx> t(q);
                is.read((char*)t.data(), (std::streamsize)(q * sizeof(cplx)));
                if (is) return t;
            }
        }
    }
    auto t = s4_table_compute(q);
    std::string tmp = path + ".tmp";
    std::ofstream os(tmp, std::ios::binary);
    if (os) {
        os.write("WLS4", 4);
        os.write((const char*)&q, 8);
        os.write((const char*)t.data(), (std::streamsize)(q * sizeof(cplx)));
        os.close();
        if (os) std::rename(tmp.c_str(), path.c_str());
    }
    return t;
}

// S_2(q,a)^2 for a unit a mod a prime power q.
cplx s2_squared(u64 q, u64 a) {
    if (q == 1) return {1.0, 0.0};
    if (q % 2 == 1) {
        // (jacobi(a,q) S_2(q,1))^2 = S_2(q,1)^2 = +-q, independent of a
        return (q % 4 == 1) ? cplx((double)q, 0.0) : cplx(-(double)q, 0.0);
    }
    cplx v = gauss_sum_s2_closed(q, a).value;
    return v * v;
}

std::vector<cplx> g_table_build(int s, u64 q) {
    // g[a] = S_2(q,a)^2 S_4(q,a)^s on units, 0 elsewhere
    if (q == 1) return {cplx(1.0, 0.0)};
    auto s4 = s4_table(q);
    std::vector<cplx> g(q, cplx(0, 0));
    cplx s2sq_odd = (q % 2 == 1) ? s2_squared(q, 1) : cplx(0, 0);
    for (u64 a = 1; a < q; ++a) {
        if (gcd_u64(a, q) != 1) continue;
        cplx s4p = s4[a];
        cplx s4s = s4p * s4p * s4p;
        if (s == 4) s4s *= s4p;
        g[a] = ((q % 2 == 1) ? s2sq_odd : s2_squared(q, a)) * s4s;
    }
    return g;
}

class GTableCache {
  public:
    std::shared_ptr<const std::vector<cplx>> get(int s, u64 q) {
        if (q > k_table_cache_cap) return std::make_shared<const std::vector<cplx>>(g_table_build(s, q));
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = map_.find({s, q});
            if (it != map_.end()) return it->second;
        }
        auto built = std::make_shared<const std::vector<cplx>>(g_table_build(s, q));
        std::lock_guard<std::mutex> lk(mu_);
        auto [it, inserted] = map_.try_emplace({s, q}, built);
        return it->second;  // first builder wins; results are identical anyway
    }
    void clear() {
        std::lock_guard<std::mutex> lk(mu_);
        map_.clear();
    }

  private:
    std::mutex mu_;
    std::map<std::pair<int, u64>, std::shared_ptr<const std::vector<cplx>>> map_;
};

GTableCache g_cache;

// sum_a g[a] e(-n a / q); rotation advanced incrementally and re-anchored to
// the exact integer phase every 4096 steps.
cplx unit_dot(const std::vector<cplx>& g, u64 q, u64 n) {
    const u64 nm = n % q;
    const cplx step = unit_root(q - nm == q ? 0 : q - nm, q);
    cplx rot(1.0, 0.0), acc(0.0, 0.0);
    for (u64 a = 0; a < q; ++a) {
        const cplx& ga = g[a];
        if (ga.real() != 0.0 || ga.imag() != 0.0) acc += ga * rot;
        if ((a & 4095) == 4095)
            rot = unit_root(mulmod(q - nm == q ? 0 : q - nm, a + 1, q), q);
        else
            rot *= step;
    }
    return acc;
}

// Ramanujan sum c_q(n) for prime powers q = p^h.
double ramanujan_pp(u64 p, int h, u64 n) {
    u64 ph = 1, ph1 = 1;
    for (int i = 0; i < h; ++i) {
        ph1 = ph;
        ph *= p;
    }
    if (n % ph == 0) return (double)(ph - ph1);  // phi(p^h)
    if (n % ph1 == 0) return -(double)ph1;
    return 0.0;
}

// A(p^h, n). Above the table cap the odd-p closed form applies: for p odd and
// 2 <= h <= 4 one has S_4(p^h, a) = p^{h-1} for every unit a, and
// S_2(p^h,a)^2 = +-p^h, so the unit sum collapses to a Ramanujan sum:
//   A(p^h, n) = eps(p^h) p^{-h-s} c_{p^h}(n),  eps(q) = +1 if q=1 mod 4 else -1.
double a_term_prime_power(int s, u64 n, u64 p, int h) {
    u64 q = 1;
    for (int i = 0; i < h; ++i) q *= p;
    if (h == 0) return 1.0;
    if (q <= k_generic_cap) {
        auto g = g_cache.get(s, q);
        cplx sum = unit_dot(*g, q, n % q);
        double scale = std::pow((double)q, -(double)(2 + s));
        cplx a = sum * scale;
        if (std::fabs(a.imag()) > k_imag_tol)
            throw integrity_error("a_term: imaginary part above 1e-8 at q=" + std::to_string(q));
        return a.real();
    }
    if (p % 2 == 1 && h >= 2 && h <= 4) {
        double eps = (q % 4 == 1) ? 1.0 : -1.0;
        return eps * std::pow((double)p, -(double)(h + s)) * ramanujan_pp(p, h, n);
    }
    throw capacity_error("a_term: prime power " + std::to_string(q) + " beyond supported evaluation depth");
}

}  // namespace

void clear_singular_caches() { g_cache.clear(); }

double a_term(int s, u64 n, u64 q) {
    if (s != 3 && s != 4) throw std::invalid_argument("a_term: s must be 3 or 4");
    if (q == 0) throw std::invalid_argument("a_term: q must be positive");
    double prod = 1.0;
    for (const auto& [p, e] : factorize(q).factors) prod *= a_term_prime_power(s, n, p, e);
    return prod;
}

// ---------------------------------------------------------------------------
// q-sum route
// ---------------------------------------------------------------------------

SingularSeriesResult singular_series_qsum(int s, u64 n, u64 q_max) {
    if (s != 3 && s != 4) throw std::invalid_argument("singular_series_qsum: s must be 3 or 4");
    if (q_max < 1) throw std::invalid_argument("singular_series_qsum: q_max must be >= 1");
    // smallest prime factor sieve drives the multiplicative assembly
    std::vector<u32> spf(q_max + 1, 0);
    for (u64 i = 2; i <= q_max; ++i) {
        if (spf[i] == 0)
            for (u64 j = i; j <= q_max; j += i)
                if (spf[j] == 0) spf[j] = (u32)i;
    }
    std::map<u64, double> pp_memo;  // prime power -> A(p^h, n)
    auto a_pp = [&](u64 p, int h, u64 q) {
        auto it = pp_memo.find(q);
        if (it != pp_memo.end()) return it->second;
        double v = a_term_prime_power(s, n, p, h);
        pp_memo.emplace(q, v);
        return v;
    };
    double sum = 0.0, envelope = 0.0;
    const double tail_exp = 1.0 + s / 4.0;
    for (u64 q = 1; q <= q_max; ++q) {
        double aq = 1.0;
        u64 rest = q;
        while (rest > 1) {
            u64 p = spf[rest];
            u64 ppow = 1;
            int h = 0;
            while (rest % p == 0) {
                rest /= p;
                ppow *= p;
                ++h;
            }
            aq *= a_pp(p, h, ppow);
        }
        sum += aq;
        envelope = std::max(envelope, std::fabs(aq) * std::pow((double)q, tail_exp));
    }
    SingularSeriesResult r;
    r.s = s;
    r.n = n;
    r.value = sum;
    r.method = SingularMethod::QSum;
    r.q_max = q_max;
    r.tail_estimate = envelope * std::pow((double)q_max, -s / 4.0);
    return r;
}

// ---------------------------------------------------------------------------
// local densities by solution counting
//
// c2[t] = #{r mod q : r^2 = t}, c4[t] = #{r : r^4 = t}; the number of
// solutions of x1^2+x2^2+sum y_i^4 = n (mod q) is the (s+2)-fold cyclic
// convolution of these histograms evaluated at n. Small moduli run the
// convolution as exact integer loops; larger ones go through the FFT form
// of the same convolution.
// ---------------------------------------------------------------------------

namespace {

constexpr u64 k_dense_cap = 4096;

// exact u64 counts; q^{s+1} <= 4096^5 < 2^60 so no overflow at the dense cap
std::vector<u64> dense_solution_counts(int s, u64 q) {
    std::vector<u64> c2(q, 0), c4(q, 0);
    for (u64 r = 0; r < q; ++r) {
        u64 r2 = mulmod(r, r, q);
        c2[r2] += 1;
        c4[mulmod(r2, r2, q)] += 1;
    }
    std::vector<u64> acc(q, 0);
    for (u64 t = 0; t < q; ++t) {
        if (!c2[t]) continue;
        for (u64 u = 0; u < q; ++u) {
            u64 m = t + u < q ? t + u : t + u - q;
            acc[m] += c2[t] * c2[u];
        }
    }
    for (int j = 0; j < s; ++j) {
        std::vector<u64> next(q, 0);
        for (u64 t = 0; t < q; ++t) {
            if (!acc[t]) continue;
            for (u64 u = 0; u < q; ++u) {
                if (!c4[u]) continue;
                u64 m = t + u < q ? t + u : t + u - q;
                next[m] += acc[t] * c4[u];
            }
        }
        acc.swap(next);
    }
    return acc;
}

struct DensityCacheKey {
    int s;
    u64 q;
    bool operator<(const DensityCacheKey& o) const { return s != o.s ? s < o.s : q < o.q; }
};
std::map<DensityCacheKey, std::shared_ptr<const std::vector<u64>>> density_cache;
std::mutex density_mu;

double counted_density(int s, u64 n, u64 q) {
    if (q == 1) return 1.0;
    if (q <= k_dense_cap) {
        std::shared_ptr<const std::vector<u64>> tab;
        {
            std::lock_guard<std::mutex> lk(density_mu);
            auto it = density_cache.find({s, q});
            if (it != density_cache.end()) tab = it->second;
        }
        if (!tab) {
            tab = std::make_shared<const std::vector<u64>>(dense_solution_counts(s, q));
            std::lock_guard<std::mutex> lk(density_mu);
            density_cache.try_emplace({s, q}, tab);
        }
        // density = N / q^{s+1}
        double scale = 1.0;
        for (int i = 0; i < s + 1; ++i) scale /= (double)q;
        return (double)(*tab)[n % q] * scale;
    }
    if (q > k_count_feasible) throw capacity_error("counted_density: modulus too large");
    // FFT form: density = sum_t (C2[t]/q)^2 (C4[t]/q)^s e(+nt/q), with C the
    // forward DFTs of the histograms.
    std::vector<cplx> c2(q, cplx(0, 0)), c4(q, cplx(0, 0));
    for (u64 r = 0; r < q; ++r) {
        u64 r2 = mulmod(r, r, q);
        c2[r2] += 1.0;
        c4[mulmod(r2, r2, q)] += 1.0;
    }
    auto f2 = dft_any(c2, -1);
    auto f4 = dft_any(c4, -1);
    const double inv_q = 1.0 / (double)q;
    const u64 nm = n % q;
    const cplx step = unit_root(nm, q);
    cplx rot(1.0, 0.0), acc(0.0, 0.0);
    for (u64 t = 0; t < q; ++t) {
        cplx a = f2[t] * inv_q;
        cplx b = f4[t] * inv_q;
        cplx term = a * a * b * b * b;
        if (s == 4) term *= b;
        acc += term * rot;
        if ((t & 4095) == 4095)
            rot = unit_root(mulmod(nm, t + 1, q), q);
        else
            rot *= step;
    }
    if (std::fabs(acc.imag()) > k_imag_tol)
        throw integrity_error("counted_density: imaginary part above tolerance");
    return acc.real();
}

bool densities_agree(double a, double b) {
    return std::fabs(a - b) <= 1e-6 * std::max(1e-6, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

LocalFactor local_density(int s, u64 n, u64 p, int h_max) {
    if (s != 3 && s != 4) throw std::invalid_argument("local_density: s must be 3 or 4");
    if (!is_prime_u64(p)) throw std::invalid_argument("local_density: p must be prime");
    if (h_max < 1) throw std::invalid_argument("local_density: h_max must be >= 1");

    LocalFactor lf;
    lf.p = p;

    const bool hensel_const = (p % 2 == 1 && n % p != 0);
    std::vector<double> dens;  // counting densities at levels 1..H
    dens.push_back(counted_density(s, n, p));
    if (!hensel_const && p % 2 == 1) {
        // p odd dividing n: A(p^{h+1}) carries the Ramanujan factor c_{p^{h+1}}(n),
        // which vanishes once p^h does not divide n, and then every deeper
        // correction vanishes too -- consecutive agreement is a sound stop.
        u64 q = p;
        for (int h = 2; h <= 24; ++h) {
            if (q > k_count_feasible / p) break;
            q *= p;
            dens.push_back(counted_density(s, n, q));
            if (densities_agree(dens[h - 2], dens[h - 1])) break;
        }
    } else if (p == 2) {
        // 2-adic densities can pause for a level and move again (fourth powers
        // are 0/1 mod 16), and they settle only around v_2(n)+6. Treat h_max as
        // a floor: always reach it, then continue until two consecutive level
        // pairs agree, within the table feasibility cap 2^20.
        int v2 = 0;
        for (u64 m = n; m && m % 2 == 0; m /= 2) ++v2;
        const int target = std::max(h_max, v2 + 6);
        u64 q = 2;
        for (int h = 2; h <= 20; ++h) {
            q *= 2;
            if (q > k_generic_cap) break;
            dens.push_back(counted_density(s, n, q));
            bool settled = h >= 3 && densities_agree(dens[h - 2], dens[h - 1]) &&
                           densities_agree(dens[h - 3], dens[h - 2]);
            if (h >= target && settled) break;
        }
    }
    const int deepest = (int)dens.size();
    if (hensel_const) {
        // every solution mod p is nonsingular (some variable is a unit, so a
        // partial derivative 2x or 4y^3 is one too); Hensel lifting multiplies
        // the count by exactly p^{s+1} per level and the density is constant
        lf.stabilized = true;
        lf.h_used = 1;
    } else {
        lf.stabilized = deepest >= 2 && densities_agree(dens[deepest - 2], dens[deepest - 1]);
        int settle = deepest;
        while (settle > 1 && densities_agree(dens[settle - 2], dens[settle - 1])) --settle;
        lf.h_used = lf.stabilized ? settle : deepest;
    }

    // exponential-sum route at the same depth
    double partial = 1.0;
    for (int j = 1; j <= deepest; ++j) partial += a_term_prime_power(s, n, p, j);
    const double counted = dens.back();
    if (std::fabs(partial - counted) > 1e-6 * std::max(1e-6, std::fabs(counted)))
        throw integrity_error("local_density: A-sum and counting routes disagree at p=" + std::to_string(p));
    lf.sigma_p = partial;
    return lf;
}

SingularSeriesResult singular_series_euler(int s, u64 n, u64 p_max, int h_max) {
    if (s != 3 && s != 4) throw std::invalid_argument("singular_series_euler: s must be 3 or 4");
    if (p_max < 2) throw std::invalid_argument("singular_series_euler: p_max must be >= 2 (p = 2 is mandatory)");
    SingularSeriesResult r;
    r.s = s;
    r.n = n;
    r.method = SingularMethod::Euler;
    r.p_max = p_max;
    r.h_max = h_max;
    std::vector<bool> comp(p_max + 1, false);
    double prod = 1.0, envelope = 0.0;
    const double env_exp = 1.0 + s / 4.0;
    for (u64 p = 2; p <= p_max; ++p) {
        if (comp[p]) continue;
        for (u64 j = p * p; j <= p_max; j += p) comp[j] = true;
        LocalFactor lf = local_density(s, n, p, h_max);
        prod *= lf.sigma_p;
        if (p % 2 == 1 && n % p != 0)
            envelope = std::max(envelope, std::fabs(lf.sigma_p - 1.0) * std::pow((double)p, env_exp));
        r.local_factors.push_back(lf);
    }
    r.value = prod;
    // tail: integrate the fitted envelope C p^{-1-s/4} over the prime density
    r.tail_estimate = envelope * (4.0 / s) * std::pow((double)p_max, -s / 4.0) / std::log((double)p_max);
    return r;
}

MainTermResult main_term(int s, u64 n, const SingularSeriesResult& ss) {
    if (ss.s != s || ss.n != n) throw std::invalid_argument("main_term: singular series computed for different (s,n)");
    MainTermResult m;
    m.s = s;
    m.n = n;
    m.singular_series = ss;
    m.constant_c = c_s_constant(s);
    m.gamma54_pow4 = gamma54_pow4();
    m.main_term = m.constant_c * m.gamma54_pow4 * ss.value * std::pow((double)n, s / 4.0);
    return m;
}

// ---------------------------------------------------------------------------
// scan tables
// ---------------------------------------------------------------------------

SingularScanTable::SingularScanTable(int s, u64 q_max) : s_(s), q_max_(q_max) {
    if (s != 3 && s != 4) throw std::invalid_argument("SingularScanTable: s must be 3 or 4");
    if (q_max < 1 || q_max > 4096) throw capacity_error("SingularScanTable: q_max must be in [1, 4096]");
    a_mod_.assign(q_max + 1, {});
    a_mod_[1] = {1.0};
    env_weight_.assign(q_max + 1, 0.0);
    for (u64 q = 1; q <= q_max; ++q) env_weight_[q] = std::pow((double)q, 1.0 + s / 4.0);
    // prime-power blocks via one forward DFT of the unit-product table each
    std::vector<u32> spf(q_max + 1, 0);
    for (u64 i = 2; i <= q_max; ++i)
        if (spf[i] == 0)
            for (u64 j = i; j <= q_max; j += i)
                if (spf[j] == 0) spf[j] = (u32)i;
    for (u64 q = 2; q <= q_max; ++q) {
        u64 rest = q / spf[q];
        bool prime_power = true;
        while (rest > 1) {
            if (rest % spf[q] != 0) {
                prime_power = false;
                break;
            }
            rest /= spf[q];
        }
        if (!prime_power) continue;
        auto g = g_cache.get(s_, q);
        auto b = dft_any(*g, -1);  // b[m] = sum_a g[a] e(-ma/q)
        const double scale = std::pow((double)q, -(double)(2 + s_));
        std::vector<double> row(q);
        for (u64 m = 0; m < q; ++m) {
            cplx v = b[m] * scale;
            if (std::fabs(v.imag()) > k_imag_tol)
                throw integrity_error("SingularScanTable: imaginary part above 1e-8 at q=" + std::to_string(q));
            row[m] = v.real();
        }
        a_mod_[q] = std::move(row);
    }
    // composite moduli by CRT products of their prime-power blocks
    for (u64 q = 2; q <= q_max; ++q) {
        if (!a_mod_[q].empty()) continue;
        std::vector<u64> blocks;
        u64 rest = q;
        while (rest > 1) {
            u64 p = spf[rest], ppow = 1;
            while (rest % p == 0) {
                rest /= p;
                ppow *= p;
            }
            blocks.push_back(ppow);
        }
        std::vector<double> row(q, 1.0);
        for (u64 ppow : blocks) {
            const auto& blk = a_mod_[ppow];
            for (u64 m = 0; m < q; ++m) row[m] *= blk[m % ppow];
        }
        a_mod_[q] = std::move(row);
    }
}

double SingularScanTable::evaluate(u64 n, double* tail) const {
    double sum = 0.0, envelope = 0.0;
    for (u64 q = 1; q <= q_max_; ++q) {
        double aq = a_mod_[q][n % q];
        sum += aq;
        if (tail) envelope = std::max(envelope, std::fabs(aq) * env_weight_[q]);
    }
    if (tail) *tail = envelope * std::pow((double)q_max_, -s_ / 4.0);
    return sum;
}

}  // namespace wlab
