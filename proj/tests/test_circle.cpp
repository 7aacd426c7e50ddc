#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <quadmath.h>

#include <random>

#include "doctest.h"
#include "wlab/circle.hpp"
#include "wlab/repcount.hpp"

using namespace wlab;

namespace {

// quad-precision reference: phases carried in __float128 end to end
cplx weyl_ref_quad(int k, double x, double alpha) {
    u64 pk = (k == 2) ? isqrt((u64)x) : iroot4((u64)x);
    __float128 a = alpha, re = 0, im = 0;
    for (u64 xi = 1; xi <= pk; ++xi) {
        __float128 xk = (__float128)xi * xi;
        if (k == 4) xk *= xk;
        __float128 ph = a * xk;
        ph -= floorq(ph);
        re += cosq(2 * M_PIq * ph);
        im += sinq(2 * M_PIq * ph);
    }
    return {(double)re, (double)im};
}

// psi_at_x = 65536^0.02, a pow:0.02 dial evaluated at X
DissectionParams test_params() { return DissectionParams(65536.0, 0.3, 0.05, 1.2483305); }

}  // namespace

TEST_CASE("weyl sum closed probes") {
    CHECK(std::abs(weyl_sum(2, 16.0, 1.0) - cplx(4.0, 0.0)) < 1e-12);
    CHECK(std::abs(weyl_sum(4, 16.0, 0.5) - cplx(0.0, 0.0)) < 1e-12);  // e(1/2)+e(8) = 0
}

TEST_CASE("weyl sum matches quad-precision reference") {
    const double golden_frac = 0.61803398874989484820;
    for (double x : {1e4, 1e6, 1e9}) {
        cplx f = weyl_sum(2, x, golden_frac);
        cplx ref = weyl_ref_quad(2, x, golden_frac);
        CHECK(std::abs(f - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
    }
    for (double x : {1e4, 1e8}) {
        cplx f = weyl_sum(4, x, golden_frac);
        cplx ref = weyl_ref_quad(4, x, golden_frac);
        CHECK(std::abs(f - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("v integral at beta=0 is P_k") {
    CHECK(std::abs(v_integral(2, 100.0, 0.0) - cplx(10.0, 0.0)) < 1e-9);
    CHECK(std::abs(v_integral(4, 10000.0, 0.0) - cplx(10.0, 0.0)) < 1e-9);
}

TEST_CASE("v integral matches brute quadrature") {
    // 1e6-panel midpoint rule as an independent oracle
    auto brute = [](int k, double x, double beta) {
        const u64 panels = 1000000;
        double pk = std::pow(x, 1.0 / k);
        double h = pk / (double)panels;
        cplx acc(0, 0);
        for (u64 j = 0; j < panels; ++j) {
            double g = ((double)j + 0.5) * h;
            double gk = g * g;
            if (k == 4) gk *= gk;
            acc += unit(beta * gk);
        }
        return acc * h;
    };
    cplx v = v_integral(2, 100.0, 0.01);
    CHECK(std::abs(v - brute(2, 100.0, 0.01)) < 1e-6);
    cplx v4 = v_integral(4, 4096.0, 3.0 / 4096.0);
    CHECK(std::abs(v4 - brute(4, 4096.0, 3.0 / 4096.0)) < 1e-6);
}

TEST_CASE("v integral decay constant stays modest") {
    double x = 1e4;
    cplx v = v_integral(4, x, 10.0 / x);
    double bound_unit = std::pow(x, 0.25) * std::pow(11.0, -0.25);
    CHECK(std::abs(v) <= 3.0 * bound_unit);
}

TEST_CASE("v integral is conjugate-symmetric in beta") {
    for (int k : {2, 4}) {
        cplx plus = v_integral(k, 4096.0, 0.003);
        cplx minus = v_integral(k, 4096.0, -0.003);
        CHECK(std::abs(minus - std::conj(plus)) < 1e-10);
    }
}

TEST_CASE("f_star at the rational point") {
    double x = 4096.0;
    ReducedFraction f{1, 3};
    cplx expect = gauss_sum_direct(4, 3, 1).value / 3.0 * std::pow(x, 0.25);
    CHECK(std::abs(f_star(4, x, f, 1.0 / 3.0) - expect) < 1e-9);
    // S_2(2,1) = 0 kills the k=2, q=2 approximant identically
    CHECK(std::abs(f_star(2, x, {1, 2}, 0.5 + 1.0 / x)) < 1e-12);
}

TEST_CASE("f_star rejects alpha outside the window") {
    CHECK_THROWS_AS(f_star(2, 65536.0, {1, 3}, 0.5), std::invalid_argument);
}

TEST_CASE("dissection params validate the chain R <= P4 <= Y <= sqrt(X)/2") {
    CHECK_NOTHROW(test_params());
    CHECK_THROWS_AS(DissectionParams(65536.0, 0.3, 0.4, 2.0), std::invalid_argument);  // Y too big
    CHECK_THROWS_AS(DissectionParams(65536.0, -0.1, 0.05, 1.0), std::invalid_argument);
}

TEST_CASE("classifier lands rational probes in the predicted strata") {
    auto params = test_params();
    auto lab = classify_arc(0.5, params);  // q=2 <= R
    CHECK(lab.is_major);
    CHECK(lab.frac.q == 2);
    CHECK(lab.frac.a == 1);

    lab = classify_arc(2.0 / 5.0, params);  // R < 5 <= P4
    CHECK(!lab.is_major);
    CHECK(lab.stratum == MinorStratum::m4);

    lab = classify_arc(3.0 / 50.0, params);  // P4 < 50 <= Y
    CHECK(!lab.is_major);
    CHECK(lab.stratum == MinorStratum::m3);

    lab = classify_arc(7.0 / 120.0, params);  // Y < 120 <= sqrt(X)/2
    CHECK(!lab.is_major);
    CHECK(lab.stratum == MinorStratum::m2);

    lab = classify_arc(std::sqrt(2.0) - 1.0, params);  // all convergents too wide
    CHECK(!lab.is_major);
    CHECK(lab.stratum == MinorStratum::m1);
}

TEST_CASE("window nesting over random alpha") {
    auto params = test_params();
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> uni(1e-3, 1.0);
    const double levels[4] = {params.r, params.p4, params.y, params.p2 / 2.0};
    for (int i = 0; i < 10000; ++i) {
        double alpha = uni(rng);
        bool in_prev = true;
        bool seen[4];
        for (int l = 0; l < 4; ++l) seen[l] = find_major_window(alpha, params.x, levels[l]).has_value();
        for (int l = 0; l < 3; ++l)
            if (seen[l]) CHECK(seen[l + 1]);
        // the classifier label must match the innermost containing family
        auto lab = classify_arc(alpha, params);
        if (seen[0]) {
            CHECK(lab.is_major);
        } else if (seen[1]) {
            CHECK(lab.stratum == MinorStratum::m4);
        } else if (seen[2]) {
            CHECK(lab.stratum == MinorStratum::m3);
        } else if (seen[3]) {
            CHECK(lab.stratum == MinorStratum::m2);
        } else {
            CHECK(lab.stratum == MinorStratum::m1);
        }
        (void)in_prev;
    }
}

TEST_CASE("moment counts: diagonal-only region and slow enumeration") {
    CHECK(moment_count(4, 2, 10) == 190);  // 2P^2 - P below the first nontrivial pair
    CHECK(moment_count(4, 1, 7) == 7);
    // O(P^{2m}) full enumeration for small P
    auto slow = [](int k, int m, u64 P) {
        auto pw = [&](u64 v) {
            u64 r = v * v;
            return k == 4 ? r * r : r;
        };
        u64 cnt = 0;
        std::vector<u64> t(2 * m, 1);
        for (;;) {
            u64 lhs = 0, rhs = 0;
            for (int i = 0; i < m; ++i) lhs += pw(t[i]);
            for (int i = m; i < 2 * m; ++i) rhs += pw(t[i]);
            if (lhs == rhs) ++cnt;
            int pos = 2 * m - 1;
            while (pos >= 0 && ++t[pos] > P) {
                t[pos] = 1;
                --pos;
            }
            if (pos < 0) break;
        }
        return cnt;
    };
    for (u64 P : {3ull, 5ull, 9ull, 12ull}) {
        CHECK(moment_count(2, 2, P) == slow(2, 2, P));
        CHECK(moment_count(4, 2, P) == slow(4, 2, P));
    }
    CHECK(moment_count(2, 3, 6) == slow(2, 3, 6));
    CHECK(moment_count(4, 3, 5) == slow(4, 3, 5));
    CHECK(moment_count(2, 2, 5) == slow(2, 2, 5));
}

TEST_CASE("weyl samples carry f* exactly on major arcs") {
    auto params = test_params();
    auto major = sample_weyl(2, params, 0.5 + 0.5 / params.x);
    CHECK(major.arc.is_major);
    CHECK(major.f_star.has_value());
    auto minor = sample_weyl(2, params, std::sqrt(2.0) - 1.0);
    CHECK(!minor.arc.is_major);
    CHECK(!minor.f_star.has_value());
}

TEST_CASE("capacity guards") {
    CHECK_THROWS_AS(v_integral(2, 1e9, 0.9), capacity_error);          // too oscillatory
    CHECK_THROWS_AS(moment_count(4, 4, 100), capacity_error);          // eighth moment too wide
    CHECK_THROWS_AS(moment_count(2, 2, 500), std::invalid_argument);   // P cap
}

TEST_CASE("eighth-moment counts agree with full enumeration at small P") {
    auto pw4 = [](u64 v) { return v * v * v * v; };
    for (u64 P : {2ull, 4ull, 6ull}) {
        u64 brute = 0;
        std::vector<u64> t(8, 1);
        for (;;) {
            u64 lhs = pw4(t[0]) + pw4(t[1]) + pw4(t[2]) + pw4(t[3]);
            u64 rhs = pw4(t[4]) + pw4(t[5]) + pw4(t[6]) + pw4(t[7]);
            if (lhs == rhs) ++brute;
            int pos = 7;
            while (pos >= 0 && ++t[pos] > P) {
                t[pos] = 1;
                --pos;
            }
            if (pos < 0) break;
        }
        CHECK(moment_count(4, 4, P) == brute);
    }
}

TEST_CASE("sparse hash-join path agrees with the brute count") {
    // (k=4, m=2, P=60) exceeds the dense range and runs the hash-join
    auto pw4 = [](u64 v) { return v * v * v * v; };
    u64 brute = 0;
    for (u64 a = 1; a <= 60; ++a)
        for (u64 b = 1; b <= 60; ++b)
            for (u64 c = 1; c <= 60; ++c)
                for (u64 d = 1; d <= 60; ++d)
                    if (pw4(a) + pw4(b) == pw4(c) + pw4(d)) ++brute;
    CHECK(moment_count(4, 2, 60) == brute);
}

TEST_CASE("sixth-moment growth stays under the 7/2 envelope") {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (u64 P = 10; P <= 40; P += 5) {
        double lx = std::log((double)P), ly = std::log((double)moment_count(4, 3, P));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope <= 3.6);
}

TEST_CASE("orthogonality recovers sieve counts") {
    auto rep = verify_orthogonality(3, 128);
    CHECK(rep.pass);
    CHECK(rep.max_abs_deviation < 1e-6);
    auto rep4 = verify_orthogonality(4, 64);
    CHECK(rep4.pass);
    auto small = verify_orthogonality(3, 8);  // R_3(5) = 1 sits inside this window
    CHECK(small.pass);
}

TEST_CASE("minor-arc sup diagnostic") {
    auto params = test_params();
    auto rep = minor_arc_sup_diagnostic(params, 0);
    CHECK(rep.m1_hits == 0);
    CHECK(rep.max_ratio == 0.0);
    auto run = minor_arc_sup_diagnostic(params, 400);
    CHECK(run.m1_hits > 0);
    CHECK(run.max_ratio > 0.0);
    CHECK(run.max_ratio <= 25.0);  // frozen regression guard at X = 65536
}

TEST_CASE("f_star magnitude obeys the weight envelope") {
    std::mt19937_64 rng(223);
    const double x = 65536.0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        u64 q = rng() % 128 + 1;
        u64 a = rng() % q + 1;
        if (gcd_u64(a, q) != 1) continue;
        double max_beta = 0.5 / std::sqrt(x) / (double)q;
        double beta = (2.0 * (double)(rng() % 1000) / 999.0 - 1.0) * max_beta;
        double alpha = (double)a / (double)q + beta;
        for (int k : {2, 4}) {
            cplx fs = f_star(k, x, {a, q}, alpha);
            double envelope = weight_w(k, q) * std::pow(x, 1.0 / k) * std::pow(1.0 + x * std::fabs(beta), -1.0 / k);
            worst = std::max(worst, std::abs(fs) / envelope);
        }
    }
    MESSAGE("observed max |f*| / (w_k(q) P_k (1+X|beta|)^{-1/k}) = ", worst);
    CHECK(worst <= 3.0);  // recorded constant; the decay bound carries C ~ 1
}
