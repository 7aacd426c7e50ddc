// wlab: exact representation counts for n = x1^2 + x2^2 + y1^4 + ... + ys^4,
// singular-series evaluators, Weyl-sum/arc diagnostics, and the exceptional-set
// scanner, behind one CLI.

#include <cmath>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "wlab/arith.hpp"
#include "wlab/circle.hpp"
#include "wlab/repcount.hpp"
#include "wlab/scan.hpp"
#include "wlab/singular.hpp"

using namespace wlab;

namespace {

void print_gauss_row(const GaussSumValue& g) {
    std::printf("%.17g,%.17g,%s\n", g.value.real(), g.value.imag(),
                g.method == GaussMethod::Direct ? "direct" : "closed");
}

int run_gauss(int k, u64 q, u64 a, const std::string& method) {
    if (method == "direct") {
        print_gauss_row(gauss_sum_direct(k, q, a));
    } else if (method == "closed") {
        if (k != 2) throw std::invalid_argument("closed form is available for k=2 only");
        print_gauss_row(gauss_sum_s2_closed(q, a));
    } else {
        auto d = gauss_sum_direct(k, q, a);
        print_gauss_row(d);
        if (k == 2) {
            auto c = gauss_sum_s2_closed(q, a);
            print_gauss_row(c);
            std::printf("%.17g,%.17g,difference\n", std::fabs(d.value.real() - c.value.real()),
                        std::fabs(d.value.imag() - c.value.imag()));
        }
    }
    return 0;
}

void print_singular(const SingularSeriesResult& r) {
    std::string params = r.method == SingularMethod::QSum
                             ? "qmax=" + std::to_string(r.q_max)
                             : "pmax=" + std::to_string(r.p_max) + ";hmax=" + std::to_string(r.h_max);
    std::printf("%llu,%s,%.17g,%.17g,%s\n", (unsigned long long)r.n,
                r.method == SingularMethod::QSum ? "qsum" : "euler", r.value, r.tail_estimate, params.c_str());
}

const char* stratum_name(MinorStratum s) {
    switch (s) {
        case MinorStratum::m1: return "m1";
        case MinorStratum::m2: return "m2";
        case MinorStratum::m3: return "m3";
        case MinorStratum::m4: return "m4";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circle-method laboratory for sums of two squares and s biquadrates"};
    app.require_subcommand(1);

    // gauss
    auto* gauss = app.add_subcommand("gauss", "Gauss sum S_k(q,a)");
    int g_k = 2;
    u64 g_q = 1, g_a = 1;
    std::string g_method = "both";
    gauss->add_option("--k", g_k)->check(CLI::IsMember({2, 4}))->required();
    gauss->add_option("--q", g_q)->required();
    gauss->add_option("--a", g_a)->required();
    gauss->add_option("--method", g_method)->check(CLI::IsMember({"direct", "closed", "both"}));

    // sieve
    auto* sieve = app.add_subcommand("sieve", "exact R_s table to a file");
    int sv_s = 3;
    u64 sv_xmax = 0;
    std::string sv_out, sv_strategy = "ntt";
    sieve->add_option("--s", sv_s)->check(CLI::IsMember({3, 4}))->required();
    sieve->add_option("--xmax", sv_xmax)->required();
    sieve->add_option("--out", sv_out)->required();
    sieve->add_option("--strategy", sv_strategy)->check(CLI::IsMember({"direct", "ntt"}));

    // count
    auto* count = app.add_subcommand("count", "single brute-force R_s(n)");
    int c_s = 3;
    u64 c_n = 0;
    count->add_option("--s", c_s)->check(CLI::IsMember({3, 4}))->required();
    count->add_option("--n", c_n)->required();

    // singular
    auto* sing = app.add_subcommand("singular", "singular series at n");
    int si_s = 3;
    u64 si_n = 0, si_qmax = 10000, si_pmax = 1000;
    int si_hmax = 8;
    std::string si_method = "qsum";
    sing->add_option("--s", si_s)->check(CLI::IsMember({3, 4}))->required();
    sing->add_option("--n", si_n)->required();
    sing->add_option("--method", si_method)->check(CLI::IsMember({"qsum", "euler", "both"}));
    sing->add_option("--qmax", si_qmax);
    sing->add_option("--pmax", si_pmax);
    sing->add_option("--hmax", si_hmax);

    // main-term
    auto* mt = app.add_subcommand("main-term", "c_s Gamma(5/4)^4 S(n) n^{s/4}");
    int mt_s = 3;
    u64 mt_n = 0, mt_qmax = 10000;
    mt->add_option("--s", mt_s)->check(CLI::IsMember({3, 4}))->required();
    mt->add_option("--n", mt_n)->required();
    mt->add_option("--qmax", mt_qmax);

    // arcs
    auto* arcs = app.add_subcommand("arcs", "classify alpha in the arc dissection");
    double ar_x = 0, ar_nu = 0.05, ar_tau = 0.05, ar_alpha = 0;
    std::string ar_psi = "pow:0.02";
    arcs->add_option("--x", ar_x)->required();
    arcs->add_option("--nu", ar_nu);
    arcs->add_option("--tau", ar_tau);
    arcs->add_option("--psi", ar_psi);
    arcs->add_option("--alpha", ar_alpha)->required();

    // moments
    auto* mom = app.add_subcommand("moments", "even-moment counts of f_k");
    int mo_k = 4, mo_m = 2;
    u64 mo_pmax = 10;
    mom->add_option("--k", mo_k)->check(CLI::IsMember({2, 4}))->required();
    mom->add_option("--m", mo_m)->required();
    mom->add_option("--pmax", mo_pmax)->required();

    // verify-orth
    auto* vo = app.add_subcommand("verify-orth", "DFT orthogonality check against the sieve");
    int vo_s = 3;
    u64 vo_x = 128;
    vo->add_option("--s", vo_s)->check(CLI::IsMember({3, 4}))->required();
    vo->add_option("--x", vo_x)->required();

    // weyl
    auto* wy = app.add_subcommand("weyl", "Weyl sum f_k(alpha), optionally with f*");
    int wy_k = 2;
    double wy_x = 0, wy_alpha = 0;
    bool wy_star = false;
    wy->add_option("--k", wy_k)->check(CLI::IsMember({2, 4}))->required();
    wy->add_option("--x", wy_x)->required();
    wy->add_option("--alpha", wy_alpha)->required();
    wy->add_flag("--star", wy_star);

    // scan
    auto* sc = app.add_subcommand("scan", "exceptional-set scan over (xmin, xmax]");
    int sc_s = 3;
    u64 sc_xmin = 0, sc_xmax = 0, sc_qmax = 2048;
    unsigned sc_threads = 0;
    std::string sc_psi = "pow:0.02", sc_out, sc_format = "csv";
    sc->add_option("--s", sc_s)->check(CLI::IsMember({3, 4}))->required();
    sc->add_option("--xmin", sc_xmin)->required();
    sc->add_option("--xmax", sc_xmax)->required();
    sc->add_option("--psi", sc_psi)->required();
    sc->add_option("--qmax", sc_qmax);
    sc->add_option("--out", sc_out);
    sc->add_option("--format", sc_format)->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--threads", sc_threads);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gauss) return run_gauss(g_k, g_q, g_a, g_method);

        if (*sieve) {
            auto strat = sv_strategy == "direct" ? SieveStrategy::Direct : SieveStrategy::Ntt;
            write_rep_table(sieve_representations(sv_s, sv_xmax, strat), sv_out);
            std::printf("wrote %s (s=%d, xmax=%llu)\n", sv_out.c_str(), sv_s, (unsigned long long)sv_xmax);
            return 0;
        }

        if (*count) {
            std::printf("%llu\n", (unsigned long long)brute_force_count(c_s, c_n));
            return 0;
        }

        if (*sing) {
            if (si_method == "qsum" || si_method == "both") print_singular(singular_series_qsum(si_s, si_n, si_qmax));
            if (si_method == "euler" || si_method == "both")
                print_singular(singular_series_euler(si_s, si_n, si_pmax, si_hmax));
            return 0;
        }

        if (*mt) {
            auto ss = singular_series_qsum(mt_s, mt_n, mt_qmax);
            auto m = main_term(mt_s, mt_n, ss);
            std::printf("%llu,%.17g,%.17g\n", (unsigned long long)mt_n, ss.value, m.main_term);
            return 0;
        }

        if (*arcs) {
            auto psi = PsiSpec::parse(ar_psi);
            DissectionParams params(ar_x, ar_nu, ar_tau, psi(ar_x));
            ArcLabel lab = classify_arc(ar_alpha, params);
            if (lab.is_major)
                std::printf("alpha=%.17g label=major level=R q=%llu a=%llu n_convention=X\n", ar_alpha,
                            (unsigned long long)lab.frac.q, (unsigned long long)lab.frac.a);
            else
                std::printf("alpha=%.17g label=minor stratum=%s n_convention=X\n", ar_alpha,
                            stratum_name(lab.stratum));
            return 0;
        }

        if (*mom) {
            std::printf("P,count\n");
            for (u64 p = 1; p <= mo_pmax; ++p)
                std::printf("%llu,%llu\n", (unsigned long long)p, (unsigned long long)moment_count(mo_k, mo_m, p));
            return 0;
        }

        if (*vo) {
            auto rep = verify_orthogonality(vo_s, vo_x);
            std::printf("%s max_deviation=%.3e grid=%zu\n", rep.pass ? "PASS" : "FAIL", rep.max_abs_deviation,
                        rep.grid);
            return rep.pass ? 0 : 2;
        }

        if (*wy) {
            cplx f = weyl_sum(wy_k, wy_x, wy_alpha);
            if (!wy_star) {
                std::printf("f_re,f_im\n%.17g,%.17g\n", f.real(), f.imag());
                return 0;
            }
            auto w = find_major_window(wy_alpha, wy_x, std::sqrt(wy_x) / 2.0);
            if (!w) {
                std::printf("no level-sqrt(X)/2 rational window at this alpha; f=%.17g%+.17gi\n", f.real(),
                            f.imag());
                return 0;
            }
            cplx fs = f_star(wy_k, wy_x, *w, wy_alpha);
            double beta = wy_alpha - (double)w->a / (double)w->q;
            double denom = std::sqrt((double)w->q) * std::sqrt(1.0 + wy_x * std::fabs(beta));
            std::printf("f_re,f_im,fstar_re,fstar_im,diff,bound_ratio,q,a\n");
            std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%llu,%llu\n", f.real(), f.imag(), fs.real(),
                        fs.imag(), std::abs(f - fs), std::abs(f - fs) / denom, (unsigned long long)w->q,
                        (unsigned long long)w->a);
            return 0;
        }

        if (*sc) {
            ScanParams params;
            params.s = sc_s;
            params.x_min = sc_xmin;
            params.x_max = sc_xmax;
            params.psi = PsiSpec::parse(sc_psi);
            params.q_max = sc_qmax;
            params.threads = sc_threads;
            ScanReport rep = scan(params);
            if (!sc_out.empty()) {
                export_report(rep, sc_out, sc_format);
            } else {
                std::fputs(report_csv(rep).c_str(), stdout);
            }
            std::fprintf(stderr, "blocks:\n");
            for (const auto& b : rep.ranges)
                std::fprintf(stderr,
                             "  X=%llu count=%llu exceptional=%llu cumulative=%llu median_rel_err=%.6g "
                             "near_zero=%llu psi(X)=%.6g\n",
                             (unsigned long long)b.x, (unsigned long long)b.count,
                             (unsigned long long)b.exceptional_count, (unsigned long long)b.cumulative_exceptional,
                             b.median_relative_error, (unsigned long long)b.near_zero_count, b.psi_at_x);
            const char* fs = rep.fit_state == FitState::Fitted      ? "fitted"
                             : rep.fit_state == FitState::AllClear ? "all-clear"
                                                                   : "insufficient";
            std::fprintf(stderr, "fit: state=%s exponent=%.6g reference_exponent=%.6g\n", fs, rep.fitted_exponent,
                         rep.reference_exponent);
            return 0;
        }
    } catch (const integrity_error& e) {
        std::fprintf(stderr, "integrity error: %s\n", e.what());
        return 2;
    } catch (const capacity_error& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
