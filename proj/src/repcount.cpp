#include "wlab/repcount.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "wlab/ntt.hpp"

namespace wlab {

TwoSquareTable build_two_square_table(u64 x_max) {
    if (x_max > 100000000ull) throw capacity_error("build_two_square_table: x_max above 1e8");
    TwoSquareTable t;
    t.x_max = x_max;
    t.counts.assign(x_max + 1, 0);
    for (u64 x1 = 1; x1 * x1 < x_max; ++x1) {
        u64 rem = x_max - x1 * x1;
        u64 x2_max = isqrt(rem);
        for (u64 x2 = 1; x2 <= x2_max; ++x2) t.counts[x1 * x1 + x2 * x2] += 1;
    }
    return t;
}

BiquadrateSumTable build_biquadrate_table(int s, u64 x_max) {
    if (s != 3 && s != 4) throw std::invalid_argument("build_biquadrate_table: s must be 3 or 4");
    if (x_max > 100000000ull) throw capacity_error("build_biquadrate_table: x_max above 1e8");
    BiquadrateSumTable t;
    t.s = s;
    t.x_max = x_max;
    t.counts.assign(x_max + 1, 0);
    auto p4 = [](u64 y) { return y * y * y * y; };
    for (u64 y1 = 1; p4(y1) + (u64)(s - 1) <= x_max; ++y1) {
        u64 s1 = p4(y1);
        for (u64 y2 = 1; s1 + p4(y2) + (u64)(s - 2) <= x_max; ++y2) {
            u64 s2 = s1 + p4(y2);
            for (u64 y3 = 1; s2 + p4(y3) + (u64)(s - 3) <= x_max; ++y3) {
                u64 s3 = s2 + p4(y3);
                if (s == 3) {
                    t.counts[s3] += 1;
                } else {
                    for (u64 y4 = 1; s3 + p4(y4) <= x_max; ++y4) t.counts[s3 + p4(y4)] += 1;
                }
            }
        }
    }
    return t;
}

static RepTable sieve_direct(int s, u64 x_max) {
    auto ts = build_two_square_table(x_max);
    auto bq = build_biquadrate_table(s, x_max);
    RepTable r;
    r.s = s;
    r.x_max = x_max;
    r.counts.assign(x_max + 1, 0);
    // sparse walk over biquadrate sums, shifting the two-square table
    std::vector<u64> support;
    for (u64 t = s; t <= x_max; ++t)
        if (bq.counts[t]) support.push_back(t);
    for (u64 t : support) {
        u64 c = bq.counts[t];
        const u32* src = ts.counts.data();
        u64* dst = r.counts.data() + t;
        u64 lim = x_max - t;
        for (u64 m = 2; m <= lim; ++m) dst[m] += c * src[m];
    }
    return r;
}

static RepTable sieve_ntt(int s, u64 x_max, std::size_t chunk) {
    auto ts = build_two_square_table(x_max);
    auto bq = build_biquadrate_table(s, x_max);
    RepTable r;
    r.s = s;
    r.x_max = x_max;
    r.counts.assign(x_max + 1, 0);
    const std::size_t n = (std::size_t)x_max + 1;
    if (chunk == 0 || chunk >= n) {
        std::vector<u64> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = ts.counts[i];
        for (std::size_t i = 0; i < n; ++i) b[i] = bq.counts[i];
        auto c = convolve_exact(a, b);
        for (u64 m = 0; m <= x_max && m < c.size(); ++m) r.counts[m] = c[m];
        return r;
    }
    // overlap-add over fixed-size chunks; output order fixed so summation is
    // deterministic and exact (integer adds)
    const std::size_t blocks = (n + chunk - 1) / chunk;
    for (std::size_t i = 0; i < blocks; ++i) {
        std::size_t abeg = i * chunk, aend = std::min(n, abeg + chunk);
        std::vector<u64> a(ts.counts.begin() + abeg, ts.counts.begin() + aend);
        bool a_zero = true;
        for (u64 v : a)
            if (v) {
                a_zero = false;
                break;
            }
        if (a_zero) continue;
        for (std::size_t j = 0; j < blocks; ++j) {
            std::size_t bbeg = j * chunk, bend = std::min(n, bbeg + chunk);
            if (abeg + bbeg > x_max) break;
            std::vector<u64> b(bq.counts.begin() + bbeg, bq.counts.begin() + bend);
            bool b_zero = true;
            for (u64 v : b)
                if (v) {
                    b_zero = false;
                    break;
                }
            if (b_zero) continue;
            auto c = convolve_exact(a, b);
            u64 base = abeg + bbeg;
            for (std::size_t m = 0; m < c.size() && base + m <= x_max; ++m) r.counts[base + m] += c[m];
        }
    }
    return r;
}

RepTable sieve_representations(int s, u64 x_max, SieveStrategy strategy, std::size_t ntt_chunk) {
    if (s != 3 && s != 4) throw std::invalid_argument("sieve_representations: s must be 3 or 4");
    if (strategy == SieveStrategy::Direct) {
        if (x_max > 10000000ull) throw capacity_error("sieve_representations: direct strategy capped at 1e7");
        return sieve_direct(s, x_max);
    }
    if (x_max > 100000000ull) throw capacity_error("sieve_representations: x_max above 1e8");
    if (ntt_chunk == 0 && x_max > (1ull << 24)) ntt_chunk = 1ull << 22;
    return sieve_ntt(s, x_max, ntt_chunk);
}

u64 brute_force_count(int s, u64 n) {
    if (s != 3 && s != 4) throw std::invalid_argument("brute_force_count: s must be 3 or 4");
    if (n > 1000000ull) throw capacity_error("brute_force_count: n above 1e6");
    auto p4 = [](u64 y) { return y * y * y * y; };
    u64 total = 0;
    auto two_square_reps = [](u64 m) -> u64 {
        if (m < 2) return 0;
        u64 c = 0;
        for (u64 x1 = 1; x1 * x1 < m; ++x1) {
            u64 rest = m - x1 * x1;
            u64 r = isqrt(rest);
            if (r >= 1 && r * r == rest) ++c;
        }
        return c;
    };
    for (u64 y1 = 1; p4(y1) + (u64)(s - 1) + 2 <= n; ++y1) {
        for (u64 y2 = 1; p4(y1) + p4(y2) + (u64)(s - 2) + 2 <= n; ++y2) {
            for (u64 y3 = 1; p4(y1) + p4(y2) + p4(y3) + (u64)(s - 3) + 2 <= n; ++y3) {
                u64 s3 = p4(y1) + p4(y2) + p4(y3);
                if (s == 3) {
                    total += two_square_reps(n - s3);
                } else {
                    for (u64 y4 = 1; s3 + p4(y4) + 2 <= n; ++y4) total += two_square_reps(n - s3 - p4(y4));
                }
            }
        }
    }
    return total;
}

u32 crc32_ieee(const u8* data, std::size_t len, u32 seed) {
    static const auto table = [] {
        std::array<u32, 256> t{};
        for (u32 i = 0; i < 256; ++i) {
            u32 c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    u32 c = seed ^ 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

namespace {
template <typename T>
void put_le(std::ofstream& os, T v) {
    u8 buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = (u8)(v >> (8 * i));
    os.write((const char*)buf, sizeof(T));
}
template <typename T>
T get_le(std::ifstream& is) {
    u8 buf[sizeof(T)];
    is.read((char*)buf, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= (T)buf[i] << (8 * i);
    return v;
}
}  // namespace

void write_rep_table(const RepTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_rep_table: cannot open " + path);
    os.write("WLAB", 4);
    put_le<u16>(os, 1);
    put_le<u16>(os, (u16)table.s);
    put_le<u64>(os, table.x_max);
    u32 crc = 0;  // running CRC over the count payload (seed chains transparently)
    std::vector<u8> buf;
    buf.reserve(4 << 10);
    for (u64 n = 1; n <= table.x_max; ++n) {
        u64 v = table.counts[n];
        if (v > 0xFFFFFFFFull) throw capacity_error("write_rep_table: count exceeds u32 cell");
        for (int i = 0; i < 4; ++i) buf.push_back((u8)(v >> (8 * i)));
        if (buf.size() >= (4 << 10)) {
            os.write((const char*)buf.data(), (std::streamsize)buf.size());
            crc = crc32_ieee(buf.data(), buf.size(), crc);
            buf.clear();
        }
    }
    if (!buf.empty()) {
        os.write((const char*)buf.data(), (std::streamsize)buf.size());
        crc = crc32_ieee(buf.data(), buf.size(), crc);
    }
    put_le<u32>(os, crc);
    if (!os) throw std::runtime_error("write_rep_table: write failed for " + path);
}

RepTable read_rep_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_rep_table: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "WLAB", 4) != 0) throw std::runtime_error("read_rep_table: bad magic");
    u16 version = get_le<u16>(is);
    if (version != 1) throw std::runtime_error("read_rep_table: unsupported version");
    RepTable t;
    t.s = get_le<u16>(is);
    t.x_max = get_le<u64>(is);
    t.counts.assign(t.x_max + 1, 0);
    std::vector<u8> payload((std::size_t)t.x_max * 4);
    is.read((char*)payload.data(), (std::streamsize)payload.size());
    if (!is) throw std::runtime_error("read_rep_table: truncated counts");
    u32 crc_stored = get_le<u32>(is);
    if (!is) throw std::runtime_error("read_rep_table: missing checksum");
    if (crc32_ieee(payload.data(), payload.size()) != crc_stored)
        throw integrity_error("read_rep_table: CRC mismatch");
    for (u64 n = 1; n <= t.x_max; ++n) {
        u32 v = 0;
        for (int i = 0; i < 4; ++i) v |= (u32)payload[(n - 1) * 4 + (u64)i] << (8 * i);
        t.counts[n] = v;
    }
    return t;
}

}  // namespace wlab
