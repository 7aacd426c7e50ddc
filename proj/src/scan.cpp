#include "wlab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wlab/parallel.hpp"
#include "wlab/repcount.hpp"
#include "wlab/singular.hpp"

namespace wlab {

double PsiSpec::operator()(double t) const {
    switch (family) {
        case PsiFamily::Power: return std::pow(t, param);
        case PsiFamily::LogPower: return std::pow(std::log(t), param);
        case PsiFamily::Constant: return param;
    }
    return param;
}

std::string PsiSpec::to_string() const {
    char buf[48];
    const char* name = family == PsiFamily::Power ? "pow" : family == PsiFamily::LogPower ? "logpow" : "const";
    std::snprintf(buf, sizeof buf, "%s:%.17g", name, param);
    return buf;
}

PsiSpec PsiSpec::power(double delta) {
    if (!(delta > 0) || delta > 0.25) throw std::invalid_argument("psi: power exponent must be in (0, 1/4]");
    return {PsiFamily::Power, delta};
}
PsiSpec PsiSpec::log_power(double e) {
    if (!(e > 0)) throw std::invalid_argument("psi: log exponent must be positive");
    return {PsiFamily::LogPower, e};
}
PsiSpec PsiSpec::constant(double c) {
    if (!(c > 0)) throw std::invalid_argument("psi: constant must be positive");
    return {PsiFamily::Constant, c};
}

PsiSpec PsiSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("psi spec must look like pow:D, logpow:E or const:C");
    std::string head = text.substr(0, colon);
    double v = std::stod(text.substr(colon + 1));
    if (head == "pow") return power(v);
    if (head == "logpow") return log_power(v);
    if (head == "const") return constant(v);
    throw std::invalid_argument("psi family must be pow, logpow or const");
}

namespace {

bool is_pow2(u64 v) { return v != 0 && (v & (v - 1)) == 0; }

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

ScanReport scan(const ScanParams& params) {
    if (params.s != 3 && params.s != 4) throw std::invalid_argument("scan: s must be 3 or 4");
    if (!is_pow2(params.x_max)) throw std::invalid_argument("scan: x_max must be a power of two");
    if (params.x_min != 0 && (!is_pow2(params.x_min) || params.x_min >= params.x_max))
        throw std::invalid_argument("scan: x_min must be 0 or a smaller power of two");
    if (params.x_max > (1ull << 24)) throw capacity_error("scan: x_max capped at 2^24");

    ScanReport rep;
    rep.params = params;
    rep.reference_exponent = params.s == 3 ? 3.0 / 8.0 : 1.0 / 8.0;

    const int s = params.s;
    auto strategy = params.x_max >= (1ull << 16) ? SieveStrategy::Ntt : SieveStrategy::Direct;
    RepTable table = sieve_representations(s, params.x_max, strategy);
    SingularScanTable sstab(s, params.q_max);
    const double cgamma = c_s_constant(s) * gamma54_pow4();

    const u64 first = params.x_min + 1;
    const u64 count = params.x_max - params.x_min;
    rep.records.assign(count, {});
    unsigned threads = params.threads ? params.threads : default_thread_count();
    parallel_for_chunks(count, 4096, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const u64 n = first + i;
            DeviationRecord& r = rep.records[i];
            r.n = n;
            r.r_count = table.counts[n];
            double tail = 0.0;
            r.singular = sstab.evaluate(n, &tail);
            r.tail = tail;
            const double n_s4 = std::pow((double)n, s / 4.0);
            r.main = cgamma * r.singular * n_s4;
            r.rel_dev = std::fabs((double)r.r_count - r.main) / n_s4;
            const double threshold = 1.0 / params.psi((double)n);
            r.exceptional = r.rel_dev > threshold;
            r.borderline = std::fabs(r.rel_dev - threshold) <= cgamma * tail;
            r.trivial_range = n < (u64)(s + 2);
        }
    });

    // dyadic aggregation (x/2, x], plus a degenerate (0,1] block when present
    u64 cum_exceptional = 0;
    u64 block_end = params.x_min == 0 ? 1 : 2 * params.x_min;
    std::size_t i = 0;
    while (i < rep.records.size()) {
        DyadicRange blk;
        blk.x = block_end;
        std::vector<double> devs;
        while (i < rep.records.size() && rep.records[i].n <= block_end) {
            const auto& r = rep.records[i];
            blk.count += 1;
            if (r.exceptional) blk.exceptional_count += 1;
            if (r.singular < 0.01) blk.near_zero_count += 1;
            devs.push_back(r.rel_dev);
            ++i;
        }
        cum_exceptional += blk.exceptional_count;
        blk.cumulative_exceptional = cum_exceptional;
        blk.median_relative_error = median_of(std::move(devs));
        blk.psi_at_x = params.psi((double)blk.x);
        rep.ranges.push_back(blk);
        block_end *= 2;
    }

    for (const auto& r : rep.records)
        if (r.singular < 0.01) rep.near_zero.push_back({r.n, r.singular, r.exceptional});

    FitResult fit = fit_exponent(rep);
    rep.fit_state = fit.state;
    rep.fitted_exponent = fit.exponent;
    return rep;
}

FitResult fit_exponent(const ScanReport& report) {
    std::vector<std::pair<double, double>> pts;
    bool any_nonzero = false;
    for (const auto& blk : report.ranges) {
        if (blk.exceptional_count > 0) {
            any_nonzero = true;
            pts.emplace_back(std::log2((double)blk.x), std::log2((double)blk.exceptional_count));
        }
    }
    if (!any_nonzero) return {FitState::AllClear, 0.0};
    if (pts.size() < 3) return {FitState::Insufficient, 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = (double)pts.size();
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return {FitState::Fitted, slope};
}

// ---------------------------------------------------------------------------
// export / import
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string record_tags(const DeviationRecord& r) {
    std::string t;
    if (r.trivial_range) t += "trivial-range";
    if (r.borderline) {
        if (!t.empty()) t += ';';
        t += "borderline";
    }
    return t;
}

}  // namespace

std::string report_csv(const ScanReport& report) {
    std::ostringstream os;
    const auto& p = report.params;
    os << "# wlab-scan version=" << wlab_version << " s=" << p.s << " psi=" << p.psi.to_string()
       << " qmax=" << p.q_max << " xmin=" << p.x_min << " xmax=" << p.x_max << "\n";
    os << "n,R,singular,main,rel_dev,exceptional,tags\n";
    for (const auto& r : report.records) {
        os << r.n << ',' << r.r_count << ',' << fmt_double(r.singular) << ',' << fmt_double(r.main) << ','
           << fmt_double(r.rel_dev) << ',' << (r.exceptional ? 1 : 0) << ',' << record_tags(r) << "\n";
    }
    return os.str();
}

using nlohmann::json;

static json psi_to_json(const PsiSpec& psi) {
    const char* fam = psi.family == PsiFamily::Power ? "pow" : psi.family == PsiFamily::LogPower ? "logpow" : "const";
    return json{{"family", fam}, {"param", psi.param}};
}

static PsiSpec psi_from_json(const json& j) {
    std::string fam = j.at("family");
    double v = j.at("param");
    if (fam == "pow") return PsiSpec::power(v);
    if (fam == "logpow") return PsiSpec::log_power(v);
    return PsiSpec::constant(v);
}

void export_report(const ScanReport& report, const std::string& path, const std::string& format) {
    if (format == "csv") {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("export_report: cannot open " + path);
        os << report_csv(report);
        if (!os) throw std::runtime_error("export_report: write failed for " + path);
        return;
    }
    if (format != "json") throw std::invalid_argument("export_report: format must be csv or json");
    const auto& p = report.params;
    json j;
    j["version"] = wlab_version;
    j["params"] = {{"s", p.s},       {"x_min", p.x_min},          {"x_max", p.x_max},
                   {"q_max", p.q_max}, {"psi", psi_to_json(p.psi)}, {"threads", p.threads}};
    j["fit_state"] = report.fit_state == FitState::Fitted      ? "fitted"
                     : report.fit_state == FitState::AllClear ? "all-clear"
                                                              : "insufficient";
    j["fitted_exponent"] = report.fitted_exponent;
    j["reference_exponent"] = report.reference_exponent;
    json recs = json::array();
    for (const auto& r : report.records)
        recs.push_back({{"n", r.n},
                        {"R", r.r_count},
                        {"singular", r.singular},
                        {"tail", r.tail},
                        {"main", r.main},
                        {"rel_dev", r.rel_dev},
                        {"exceptional", r.exceptional},
                        {"borderline", r.borderline},
                        {"trivial_range", r.trivial_range}});
    j["records"] = std::move(recs);
    json rng = json::array();
    for (const auto& b : report.ranges)
        rng.push_back({{"x", b.x},
                       {"count", b.count},
                       {"exceptional_count", b.exceptional_count},
                       {"cumulative_exceptional", b.cumulative_exceptional},
                       {"median_relative_error", b.median_relative_error},
                       {"near_zero_count", b.near_zero_count},
                       {"psi_at_x", b.psi_at_x}});
    j["ranges"] = std::move(rng);
    json nz = json::array();
    for (const auto& e : report.near_zero)
        nz.push_back({{"n", e.n}, {"singular", e.singular}, {"exceptional", e.exceptional}});
    j["near_zero"] = std::move(nz);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("export_report: cannot open " + path);
    os << j.dump(1);
    if (!os) throw std::runtime_error("export_report: write failed for " + path);
}

ScanReport import_report_json(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("import_report_json: cannot open " + path);
    json j = json::parse(is);
    ScanReport rep;
    const auto& p = j.at("params");
    rep.params.s = p.at("s");
    rep.params.x_min = p.at("x_min");
    rep.params.x_max = p.at("x_max");
    rep.params.q_max = p.at("q_max");
    rep.params.threads = p.at("threads");
    rep.params.psi = psi_from_json(p.at("psi"));
    std::string fs = j.at("fit_state");
    rep.fit_state = fs == "fitted" ? FitState::Fitted : fs == "all-clear" ? FitState::AllClear : FitState::Insufficient;
    rep.fitted_exponent = j.at("fitted_exponent");
    rep.reference_exponent = j.at("reference_exponent");
    for (const auto& r : j.at("records")) {
        DeviationRecord d;
        d.n = r.at("n");
        d.r_count = r.at("R");
        d.singular = r.at("singular");
        d.tail = r.at("tail");
        d.main = r.at("main");
        d.rel_dev = r.at("rel_dev");
        d.exceptional = r.at("exceptional");
        d.borderline = r.at("borderline");
        d.trivial_range = r.at("trivial_range");
        rep.records.push_back(d);
    }
    for (const auto& b : j.at("ranges")) {
        DyadicRange d;
        d.x = b.at("x");
        d.count = b.at("count");
        d.exceptional_count = b.at("exceptional_count");
        d.cumulative_exceptional = b.at("cumulative_exceptional");
        d.median_relative_error = b.at("median_relative_error");
        d.near_zero_count = b.at("near_zero_count");
        d.psi_at_x = b.at("psi_at_x");
        rep.ranges.push_back(d);
    }
    for (const auto& e : j.at("near_zero")) rep.near_zero.push_back({e.at("n"), e.at("singular"), e.at("exceptional")});
    return rep;
}

}  // namespace wlab
