#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wlab/common.hpp"

namespace wlab {

// counts[m] = #{(x1,x2) : xi >= 1, x1^2 + x2^2 = m}, for 1 <= m <= x_max.
// Index 0 is unused and kept zero.
struct TwoSquareTable {
    u64 x_max = 0;
    std::vector<u32> counts;
};

// counts[t] = # ordered s-tuples of positive integers with sum of fourth
// powers equal to t.
struct BiquadrateSumTable {
    int s = 0;
    u64 x_max = 0;
    std::vector<u32> counts;
};

// counts[n] = R_s(n), the number of ordered representations of n as
// x1^2 + x2^2 + y1^4 + ... + ys^4 in positive integers. Entries are
// intrinsic to n: any table with x_max >= n reports the same value.
struct RepTable {
    int s = 0;
    u64 x_max = 0;
    std::vector<u64> counts;
};

enum class SieveStrategy { Direct, Ntt };

TwoSquareTable build_two_square_table(u64 x_max);
BiquadrateSumTable build_biquadrate_table(int s, u64 x_max);

// R_s = (two-square coefficients) * (biquadrate-sum coefficients), truncated
// to n <= x_max. Direct accumulation and exact NTT convolution must agree
// coefficient-for-coefficient. ntt_chunk controls the overlap-add block size
// of the NTT strategy (0 = single shot when it fits).
RepTable sieve_representations(int s, u64 x_max, SieveStrategy strategy = SieveStrategy::Ntt,
                               std::size_t ntt_chunk = 0);

// Oracle: counts by full nested enumeration over y-tuples and x1, with a
// perfect-square test for the remainder. Shares no tables with the sieve.
u64 brute_force_count(int s, u64 n);

// Serialized RepTable: magic "WLAB", version u16=1, s u16, x_max u64,
// x_max u32 little-endian counts for n=1..x_max, CRC32 (IEEE) of the count
// bytes. Counts above 2^32-1 raise capacity_error on write.
void write_rep_table(const RepTable& table, const std::string& path);
RepTable read_rep_table(const std::string& path);

u32 crc32_ieee(const u8* data, std::size_t len, u32 seed = 0);

}  // namespace wlab
