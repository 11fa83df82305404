// Acceptance criteria 1-8.  Prints one "CRITERION k: PASS|FAIL" line per
// criterion (details indented below it) and exits non-zero on any FAIL.
//
//   boxdim_acceptance [--criterion k] [--threads n]

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boxdim/cover_counts.hpp"
#include "boxdim/experiments.hpp"
#include "boxdim/levy_model.hpp"
#include "boxdim/path_engine.hpp"
#include "boxdim/renewal.hpp"
#include "boxdim/report.hpp"
#include "boxdim/rng.hpp"
#include "boxdim/special.hpp"
#include "boxdim/stats.hpp"

using namespace boxdim;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;
    std::vector<std::string> reports;  // serialized reports, for the thread comparison

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void info(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, double a) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}
std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}
std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct RunOptions {
    unsigned threads = 1;
    double cutoff_scale = 1.0;
};

// ---------------------------------------------------------------------------
// 1. Exact identities

Outcome criterion1(const RunOptions&) {
    Outcome out;
    const std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
    std::size_t failures = 0, checks = 0;
    for (const auto& model : {LevyModel::stable(0.5), LevyModel::gamma(1.0, 1.0)}) {
        for (std::uint64_t rep = 0; rep < 200; ++rep) {
            SimConfig sc;
            sc.horizon = 1.0;
            sc.cutoff = 1e-6;
            sc.seed = kSeed;
            sc.replica = rep;
            const auto sk = sample_skeleton(model, sc);
            std::int64_t prev_N = 0;
            double prev_L = 0.0;
            for (double d : deltas) {
                const auto r = cover_all(sk, d, false);
                const double t = sk.horizon;
                const double shortened = value_at(sk, t, PathMode::shortened, d);
                const double truncated = value_at(sk, t, PathMode::truncated, d);
                const std::int64_t nt = count_N_truncated(sk, d) + r.Y;
                const std::int64_t mg = graph_counts(sk, d).MG;
                // machine precision: a few ulps for δ·L, summation order for the decomposition
                const bool ok = std::abs(d * r.L - shortened) <= 4 * DBL_EPSILON * shortened &&
                                std::abs(r.L - (truncated / d + double(r.Y))) <= 1e-12 * r.L &&
                                mg == static_cast<std::int64_t>(std::floor(t / d)) + r.M && r.N <= r.M &&
                                r.M <= 2 * r.N && r.N <= nt && nt <= 2 * r.N && r.N >= prev_N && r.L >= prev_L;
                ++checks;
                failures += !ok;
                prev_N = r.N;
                prev_L = r.L;
            }
        }
    }
    out.check(failures == 0, std::to_string(failures) + " failures in " + std::to_string(checks) +
                                 " (path, delta) identity checks, stable(0.5) and gamma(1,1)");
    return out;
}

// ---------------------------------------------------------------------------
// 2. Greedy count against the brute-force oracle

Outcome criterion2(const RunOptions&) {
    Outcome out;
    std::size_t mismatches = 0, max_events = 0;
    const auto model = LevyModel::stable(0.5);
    for (std::uint64_t rep = 0; rep < 200; ++rep) {
        SimConfig sc;
        sc.horizon = 1.0;
        sc.cutoff = 1e-6;
        sc.seed = kSeed;
        sc.replica = rep;
        const auto sk = sample_skeleton(model, sc);
        max_events = std::max(max_events, sk.events.size());
        for (double d : {1e-1, 1e-2, 1e-3}) mismatches += count_N(sk, d) != brute_force_N(sk, d, 100000);
    }
    out.check(max_events <= 10000, "largest skeleton has " + std::to_string(max_events) + " events");
    out.check(mismatches == 0, std::to_string(mismatches) + " mismatches over 200 paths x 3 deltas");
    return out;
}

// ---------------------------------------------------------------------------
// 3. Closed-form calibration

Outcome criterion3(const RunOptions& o) {
    Outcome out;
    const auto model = LevyModel::stable(0.5);
    const std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
    std::string digest;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        RenewalConfig rc;
        rc.seed = derive_seed(kSeed, 300 + k);
        rc.threads = o.threads;
        rc.cutoff_scale = o.cutoff_scale;
        const auto est = estimate_renewal(model, deltas[k], 100000, rc);
        const double U = *closed_form_renewal(model, deltas[k]);
        out.check(std::abs(est.U_hat - U) <= 4 * est.se_U,
                  fmt("delta=%g U_hat=%.6g closed form %.6g", deltas[k], est.U_hat, U) +
                      fmt(" (%.2f SE)", (est.U_hat - U) / est.se_U));
        digest += fmt17(est.U_hat) + ";";
    }
    const auto c = run_campaign(model, 1.0, deltas, 10000, derive_seed(kSeed, 310), o.threads, std::nullopt,
                                o.cutoff_scale);
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double d = deltas[k];
        std::vector<double> L, X;
        for (const auto& p : c.paths) {
            L.push_back(p[k].L);
            X.push_back(d * p[k].L);
        }
        const auto sl = summarize(L);
        const double m = mu(model, d);
        out.check(std::abs(sl.mean - m) <= 4 * sl.se_mean,
                  fmt("delta=%g mean L=%.6g mu=%.6g", d, sl.mean, m) + fmt(" (%.2f SE)", (sl.mean - m) / sl.se_mean));
        const auto sx = summarize(X);
        const double target = d * d * v(model, d) * v(model, d);
        const double se = bootstrap_variance_se(X, 400, derive_seed(kSeed, 320 + k));
        out.check(std::abs(sx.variance - target) <= 4 * se,
                  fmt("delta=%g var(delta L)=%.6g t delta^2 v^2=%.6g", d, sx.variance, target) +
                      fmt(" (%.2f bootstrap SE)", (sx.variance - target) / se));
        digest += fmt17(sl.mean) + ";" + fmt17(sx.variance) + ";" + fmt17(se) + ";";
    }
    out.reports.push_back(digest);
    return out;
}

// ---------------------------------------------------------------------------
// 4. Laws of large numbers

ExperimentConfig configured(ExperimentKind kind, const RunOptions& o) {
    auto c = default_config(kind);
    c.seed = kSeed;
    c.threads = o.threads;
    c.cutoff_scale = o.cutoff_scale;
    return c;
}

const ReportRow* need(Outcome& out, const ExperimentReport& rep, const std::string& stat, double delta) {
    const auto* r = rep.find(stat, delta);
    if (!r) out.check(false, rep.name + ": missing row " + stat + fmt(" at delta=%g", delta));
    return r;
}

Outcome criterion4(const RunOptions& o) {
    Outcome out;
    const auto n = run_lln_N(configured(ExperimentKind::lln_N, o));
    const auto l = run_lln_L(configured(ExperimentKind::lln_L, o));
    out.reports.push_back(report_csv(n));
    out.reports.push_back(report_csv(l));
    if (const auto* r = need(out, n, "mean_UN", 1e-4)) {
        out.check(r->value >= 0.98 && r->value <= 1.02,
                  fmt("mean U*N at delta=1e-4: %.5f (SE %.5f), band [0.98, 1.02]", r->value, r->stderr_));
    }
    if (const auto* r = need(out, l, "mean_L_over_mu", 1e-4)) {
        out.check(r->value >= 0.99 && r->value <= 1.01,
                  fmt("mean L/mu at delta=1e-4: %.5f (SE %.5f), band [0.99, 1.01]", r->value, r->stderr_));
    }
    const auto* a = need(out, n, "sd_UN", 1e-2);
    const auto* b = need(out, n, "sd_UN", 1e-4);
    if (a && b) out.check(b->value < a->value, fmt("sd of U*N: %.4g at 1e-2, %.4g at 1e-4", a->value, b->value));
    a = need(out, l, "sd_L_over_mu", 1e-2);
    b = need(out, l, "sd_L_over_mu", 1e-4);
    if (a && b) out.check(b->value < a->value, fmt("sd of L/mu: %.4g at 1e-2, %.4g at 1e-4", a->value, b->value));
    return out;
}

// ---------------------------------------------------------------------------
// 5. Central limit theorems

Outcome criterion5(const RunOptions& o) {
    Outcome out;
    const auto l = run_clt_L(configured(ExperimentKind::clt_L, o));
    const auto n = run_clt_N(configured(ExperimentKind::clt_N, o));
    out.reports.push_back(report_csv(l));
    out.reports.push_back(report_csv(n));
    for (const auto& note : n.notes) out.info("clt_N note: " + note);

    if (const auto* r = need(out, l, "ks", 1e-4)) {
        out.check(r->value < 0.05, fmt("clt_L KS at delta=1e-4: %.4f (< 0.05)", r->value));
    }
    if (const auto* r = need(out, l, "var_z", 1e-4)) {
        out.info(fmt("clt_L standardized variance at 1e-4: %.4f", r->value));
    }
    if (const auto* r = need(out, n, "ks", 1e-4)) {
        if (r->value < 0.07) {
            out.check(true, fmt("clt_N KS at delta=1e-4: %.4f (< 0.07)", r->value));
        } else {
            out.info(fmt("clt_N KS at delta=1e-4: %.4f, not below 0.07; smaller-delta reruns follow", r->value));
            bool rescued = false;
            for (double d : {1e-5, 1e-6}) {
                const auto* e = n.find("ks", d);
                if (!e) continue;
                out.info(fmt("clt_N rerun KS at delta=%g: %.4f", d, e->value));
                if (e->value < 0.07) {
                    rescued = true;
                    break;
                }
            }
            out.check(rescued, "clt_N KS below 0.07 at delta=1e-4 or at a smaller-delta rerun");
        }
    }
    if (const auto* r = need(out, l, "ks", 1e-1)) {
        out.check(r->value > 0.1, fmt("negative control: clt_L KS at delta=1e-1: %.4f (> 0.1)", r->value));
    }
    if (const auto* r = need(out, n, "ks", 1e-1)) {
        out.check(r->value > 0.1, fmt("negative control: clt_N KS at delta=1e-1: %.4f (> 0.1)", r->value));
    }
    return out;
}

// ---------------------------------------------------------------------------
// 6. Regular-variation constants

Outcome criterion6(const RunOptions& o) {
    Outcome out;
    for (double alpha : {0.5, 0.3, 0.7}) {
        auto c = configured(ExperimentKind::ratio_NL, o);
        c.model = LevyModel::stable(alpha);
        const auto rep = run_ratio_NL(c);
        out.reports.push_back(report_csv(rep));
        const double target = gamma_fn(2.0 - alpha) * gamma_fn(1.0 + alpha);
        if (const auto* h = need(out, rep, "horizon", 1e-5)) out.info(fmt("alpha=%g horizon t=%g", alpha, h->value));
        if (const auto* r = need(out, rep, "ratio_N_over_L", 1e-5)) {
            const double rel = r->value / target - 1.0;
            out.check(std::abs(rel) <= 0.03,
                      fmt("alpha=%g mean N/L at 1e-5: %.5f", alpha, r->value) +
                          fmt(" target %.5f (rel %+.4f, tol 0.03)", target, rel));
        }
        if (const auto* r = need(out, rep, "rv_L", 1e-5)) {
            out.check(std::abs(r->value - 1.0) <= 0.02,
                      fmt("alpha=%g mean L Gamma(2-a) delta^a / t at 1e-5: %.5f (tol 0.02)", alpha, r->value));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// 7. Diagnostics

Outcome criterion7(const RunOptions& o) {
    Outcome out;
    DiagnoseConfig cfg;
    cfg.seed = kSeed;
    cfg.threads = o.threads;
    cfg.cutoff_scale = o.cutoff_scale;
    const auto rep = run_diagnostics(cfg);
    out.reports.push_back(report_csv(rep));
    auto group = [&](const std::string& prefix, const std::string& label) {
        std::size_t n = 0, bad = 0;
        for (const auto& r : rep.rows) {
            if (r.statistic.rfind(prefix, 0) != 0 || r.verdict == "INFO") continue;
            ++n;
            if (r.verdict != "PASS") {
                ++bad;
                out.info(r.statistic + fmt(" at delta=%g: value %.6g target %.6g", r.delta, r.value, r.target));
            }
        }
        out.check(n > 0 && bad == 0, label + ": " + std::to_string(n - bad) + "/" + std::to_string(n) + " rows pass");
    };
    group("g_strictly_decreasing", "g strictly decreasing");
    group("R_nonneg_nondecreasing", "R >= 0");
    group("solve_lambda_roundtrip", "solve_lambda round trip to 1e-9");
    group("delta_lambda_spread", "delta*lambda constant to 1% over 1e-2..1e-5");
    group("jp_bound", "Jain-Pruitt bound <= empirical probability + 3 SE (c_const = 1)");
    group("condition2_ratio", "condition (2) ratio = 2^(1-alpha) +- 1e-6");
    group("U73_over_var_trend", "U^(7/3)/var decreasing beyond CI");
    group("moment_ratio_trend", "E[T^2]/U^2 slope not significantly positive");
    for (const auto& r : rep.rows) {
        if (r.verdict == "FAIL") out.info("failing report row: " + r.statistic + fmt(" at delta=%g", r.delta));
    }
    return out;
}

// ---------------------------------------------------------------------------
// 8. Robustness: halved cutoff, 1 vs 8 threads

Outcome criterion8(const RunOptions& o) {
    Outcome out;
    const std::vector<std::pair<int, std::function<Outcome(const RunOptions&)>>> stat = {
        {3, criterion3}, {4, criterion4}, {5, criterion5}, {6, criterion6}};
    for (const auto& [k, fn] : stat) {
        RunOptions half = o;
        half.cutoff_scale = 0.5;
        const auto res = fn(half);
        for (const auto& d : res.details) out.info("[" + std::to_string(k) + ", eps/2] " + d);
        out.check(res.pass, "criterion " + std::to_string(k) + " with the cutoff halved");
    }
    for (const auto& [k, fn] : stat) {
        RunOptions one, eight;
        one.threads = 1;
        eight.threads = 8;
        const auto a = fn(one);
        const auto b = fn(eight);
        out.check(!a.reports.empty() && a.reports == b.reports,
                  "criterion " + std::to_string(k) + " reports byte-identical with 1 and 8 threads");
    }
    {
        RunOptions one, eight;
        one.threads = 1;
        eight.threads = 8;
        out.check(criterion7(one).reports == criterion7(eight).reports,
                  "diagnostics report byte-identical with 1 and 8 threads");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    RunOptions opts;
    app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
    app.add_option("--threads", opts.threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome(const RunOptions&)>> all = {criterion1, criterion2, criterion3,
                                                                       criterion4, criterion5, criterion6,
                                                                       criterion7, criterion8};
    bool ok = true;
    for (int k = 1; k <= 8; ++k) {
        if (only != 0 && k != only) continue;
        Outcome res;
        try {
            res = all[k - 1](opts);
        } catch (const std::exception& e) {
            res.check(false, std::string("exception: ") + e.what());
        }
        std::printf("CRITERION %d: %s\n", k, res.pass ? "PASS" : "FAIL");
        for (const auto& d : res.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        ok = ok && res.pass;
    }
    return ok ? 0 : 1;
}
