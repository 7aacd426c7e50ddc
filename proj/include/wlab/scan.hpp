#pragma once

#include <string>
#include <vector>

#include "wlab/common.hpp"

namespace wlab {

inline constexpr const char* wlab_version = "1.0.0";

enum class PsiFamily { Power, LogPower, Constant };

// A sedately increasing tolerance dial: psi(t) = t^delta, (log t)^e, or c.
// Power growth is capped at delta <= 1/4.
struct PsiSpec {
    PsiFamily family = PsiFamily::Constant;
    double param = 1.0;

    double operator()(double t) const;
    std::string to_string() const;
    static PsiSpec parse(const std::string& text);  // pow:D | logpow:E | const:C
    static PsiSpec power(double delta);
    static PsiSpec log_power(double e);
    static PsiSpec constant(double c);
};

struct DeviationRecord {
    u64 n = 0;
    u64 r_count = 0;        // exact R_s(n)
    double singular = 0;    // truncated singular series
    double tail = 0;        // its tail estimate
    double main = 0;        // c_s Gamma(5/4)^4 * singular * n^{s/4}
    double rel_dev = 0;     // |R - main| / n^{s/4}
    bool exceptional = false;
    bool borderline = false;     // flag could flip within the tail estimate
    bool trivial_range = false;  // n < s+2, structurally R = 0
};

struct DyadicRange {
    u64 x = 0;  // block is (x/2, x]
    u64 count = 0;
    u64 exceptional_count = 0;
    u64 cumulative_exceptional = 0;
    double median_relative_error = 0;
    u64 near_zero_count = 0;  // singular series below 0.01
    double psi_at_x = 0;
};

struct NearZeroEntry {
    u64 n = 0;
    double singular = 0;
    bool exceptional = false;
};

struct ScanParams {
    int s = 3;
    u64 x_min = 0;  // scan covers (x_min, x_max]; both dyadic (x_min may be 0)
    u64 x_max = 0;
    PsiSpec psi;
    u64 q_max = 2048;
    unsigned threads = 0;  // 0 = hardware concurrency
};

enum class FitState { Fitted, AllClear, Insufficient };

struct ScanReport {
    ScanParams params;
    std::vector<DeviationRecord> records;
    std::vector<DyadicRange> ranges;
    std::vector<NearZeroEntry> near_zero;
    FitState fit_state = FitState::Insufficient;
    double fitted_exponent = 0;
    double reference_exponent = 0;  // comparison context: 3/8 (s=3), 1/8 (s=4)
};

// Full experiment over (x_min, x_max]: exact counts from one sieve, singular
// series by truncated q-sum tables, main terms, the exceptional criterion
// |R - main| > n^{s/4}/psi(n), dyadic aggregation. Output is independent of
// the thread count.
ScanReport scan(const ScanParams& params);

struct FitResult {
    FitState state = FitState::Insufficient;
    double exponent = 0;
};

// Least-squares slope of log2(exceptional_count) against log2(X) over dyadic
// blocks with nonzero counts; needs at least three such blocks. All-zero
// counts yield the all-clear state.
FitResult fit_exponent(const ScanReport& report);

std::string report_csv(const ScanReport& report);
void export_report(const ScanReport& report, const std::string& path, const std::string& format);
ScanReport import_report_json(const std::string& path);

}  // namespace wlab
