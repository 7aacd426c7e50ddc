#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "wlab/repcount.hpp"

using namespace wlab;

TEST_CASE("two-square table enumerated examples") {
    auto t = build_two_square_table(64);
    CHECK(t.counts[2] == 1);   // (1,1)
    CHECK(t.counts[5] == 2);   // (1,2),(2,1)
    CHECK(t.counts[50] == 3);  // (1,7),(7,1),(5,5)
    CHECK(t.counts[3] == 0);
    // counts[m] even unless m = 2x^2
    for (u64 m = 1; m <= 64; ++m) {
        u64 x = isqrt(m / 2);
        bool diag = (2 * x * x == m);
        if (!diag) CHECK(t.counts[m] % 2 == 0);
    }
}

TEST_CASE("biquadrate table examples") {
    auto t3 = build_biquadrate_table(3, 64);
    CHECK(t3.counts[3] == 1);   // (1,1,1)
    CHECK(t3.counts[18] == 3);  // permutations of (1,1,2)
    auto t4 = build_biquadrate_table(4, 64);
    CHECK(t4.counts[4] == 1);
    CHECK(t4.counts[34] == 6);  // multiset (1,1,2,2): 4!/(2!2!)
    for (u64 t = 0; t < 4; ++t) CHECK(t4.counts[t] == 0);
}

TEST_CASE("sieve spot values") {
    auto r3 = sieve_representations(3, 64, SieveStrategy::Direct);
    CHECK(r3.counts[4] == 0);
    CHECK(r3.counts[5] == 1);
    CHECK(r3.counts[8] == 2);
    auto r4 = sieve_representations(4, 64, SieveStrategy::Direct);
    CHECK(r4.counts[6] == 1);
    CHECK(r4.counts[20] == 0);
}

TEST_CASE("brute force examples") {
    CHECK(brute_force_count(3, 5) == 1);
    CHECK(brute_force_count(3, 8) == 2);
    CHECK(brute_force_count(4, 7) == 0);
    CHECK(brute_force_count(4, 6) == 1);
}

TEST_CASE("sieve equals brute force to 600") {
    for (int s : {3, 4}) {
        auto r = sieve_representations(s, 600, SieveStrategy::Direct);
        for (u64 n = 1; n <= 600; ++n) CHECK(r.counts[n] == brute_force_count(s, n));
    }
}

TEST_CASE("monotone support starts at s+2") {
    for (int s : {3, 4}) {
        auto r = sieve_representations(s, 32, SieveStrategy::Direct);
        u64 first = 0;
        for (u64 n = 1; n <= 32 && !first; ++n)
            if (r.counts[n]) first = n;
        CHECK(first == (u64)s + 2);
    }
}

TEST_CASE("direct and ntt strategies agree at 1e5") {
    for (int s : {3, 4}) {
        auto a = sieve_representations(s, 100000, SieveStrategy::Direct);
        auto b = sieve_representations(s, 100000, SieveStrategy::Ntt);
        CHECK(a.counts == b.counts);
    }
}

TEST_CASE("chunked ntt (overlap-add) equals single shot") {
    auto a = sieve_representations(3, 5000, SieveStrategy::Ntt, 0);
    auto b = sieve_representations(3, 5000, SieveStrategy::Ntt, 700);
    CHECK(a.counts == b.counts);
}

TEST_CASE("mass identity at 1e4") {
    // sum_n R_s(n) must equal an independent lattice count over
    // (x1, x2, y-tuple sums <= remaining budget)
    const u64 x = 10000;
    for (int s : {3, 4}) {
        auto r = sieve_representations(s, x, SieveStrategy::Direct);
        u64 lhs = 0;
        for (u64 n = 1; n <= x; ++n) lhs += r.counts[n];
        // cumulative count of s-tuples with sum of fourth powers <= t
        std::vector<u64> cum(x + 1, 0);
        {
            auto p4 = [](u64 y) { return y * y * y * y; };
            for (u64 y1 = 1; p4(y1) <= x; ++y1)
                for (u64 y2 = 1; p4(y1) + p4(y2) <= x; ++y2)
                    for (u64 y3 = 1; p4(y1) + p4(y2) + p4(y3) <= x; ++y3) {
                        if (s == 3) {
                            cum[p4(y1) + p4(y2) + p4(y3)] += 1;
                        } else {
                            for (u64 y4 = 1; p4(y1) + p4(y2) + p4(y3) + p4(y4) <= x; ++y4)
                                cum[p4(y1) + p4(y2) + p4(y3) + p4(y4)] += 1;
                        }
                    }
            for (u64 t = 1; t <= x; ++t) cum[t] += cum[t - 1];
        }
        u64 rhs = 0;
        for (u64 x1 = 1; x1 * x1 < x; ++x1)
            for (u64 x2 = 1; x1 * x1 + x2 * x2 < x; ++x2) rhs += cum[x - x1 * x1 - x2 * x2];
        CHECK(lhs == rhs);
    }
}

TEST_CASE("rep table round trips through the binary format") {
    auto r = sieve_representations(4, 500, SieveStrategy::Direct);
    const std::string path = "reptable_test.bin";
    write_rep_table(r, path);
    auto back = read_rep_table(path);
    CHECK(back.s == r.s);
    CHECK(back.x_max == r.x_max);
    CHECK(back.counts == r.counts);
    // flip one payload byte: the CRC must catch it
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(16 + 123);
    char c;
    f.seekg(16 + 123);
    f.get(c);
    f.seekp(16 + 123);
    f.put((char)(c ^ 0x40));
    f.close();
    CHECK_THROWS_AS(read_rep_table(path), integrity_error);
    std::remove(path.c_str());
}

TEST_CASE("R values are intrinsic to n") {
    auto small = sieve_representations(3, 300, SieveStrategy::Direct);
    auto large = sieve_representations(3, 1200, SieveStrategy::Ntt);
    for (u64 n = 1; n <= 300; ++n) CHECK(small.counts[n] == large.counts[n]);
}
