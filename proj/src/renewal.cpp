#include "boxdim/renewal.hpp"

#include <algorithm>
#include <cmath>

#include "boxdim/errors.hpp"
#include "boxdim/path_engine.hpp"
#include "boxdim/rng.hpp"
#include "boxdim/special.hpp"

namespace boxdim {

std::optional<double> closed_form_renewal(const LevyModel& model, double delta) {
    if (!(delta > 0.0)) throw DomainError("renewal: delta must be positive");
    if (!model.has_jumps() && model.drift() > 0.0) return delta / model.drift();
    if (model.is_stable() && model.drift() == 0.0) {
        const double a = *model.stable_index();
        return std::pow(delta, a) / gamma_fn(1.0 + a);
    }
    return std::nullopt;
}

double renewal_ballpark(const LevyModel& model, double delta) {
    if (auto u = closed_form_renewal(model, delta)) return *u;
    const double rate = model.drift() + (model.has_jumps() ? integrated_tail(model, delta) : 0.0);
    if (!(rate > 0.0)) throw ConfigError("renewal: the path never moves (no drift, no jumps)");
    return delta / rate;
}

double renewal_cutoff(const LevyModel& model, double delta, const RenewalConfig& cfg) {
    double eps = cfg.cutoff ? *cfg.cutoff : resolve_cutoff(model, delta);
    eps *= cfg.cutoff_scale;
    if (!(eps > 0.0)) throw ConfigError("renewal: cutoff must be positive");
    if (eps > delta / 100.0) throw ConfigError("renewal: cutoff must not exceed delta/100");
    return eps;
}

double sample_T(const LevyModel& model, double delta, double cutoff, std::uint64_t seed, std::uint64_t replica) {
    if (!(delta > 0.0)) throw DomainError("sample_T: delta must be positive");
    const double d = model.drift() + (model.has_jumps() ? truncated_moment(model, cutoff, 1) : 0.0);
    if (!model.has_jumps() && !(d > 0.0)) throw ConfigError("sample_T: the path never moves");
    double x = 0.0;
    double s = 0.0;
    double start = 0.0;
    double length = 10.0 * renewal_ballpark(model, delta);
    constexpr std::uint32_t kMaxChunks = 64;
    for (std::uint32_t chunk = 0; chunk < kMaxChunks; ++chunk) {
        const auto events = sample_events(model, cutoff, start, length, seed, replica, chunk);
        for (const auto& e : events) {
            const double c = x + d * (e.time - s);
            if (c > delta) return s + (delta - x) / d;
            x = c + e.size;
            s = e.time;
            if (x > delta) return e.time;
        }
        const double end = start + length;
        const double c = x + d * (end - s);
        if (c > delta) return s + (delta - x) / d;
        x = c;
        s = end;
        start = end;
        length *= 2.0;
    }
    throw SimulationError("sample_T: no passage within the horizon cap (value " + std::to_string(x) + " at time " +
                          std::to_string(s) + ")");
}

std::vector<double> sample_T_batch(const LevyModel& model, double delta, std::size_t n, const RenewalConfig& cfg) {
    const double eps = renewal_cutoff(model, delta, cfg);
    std::vector<double> out(n);
    parallel_for(n, cfg.threads, [&](std::size_t i) { out[i] = sample_T(model, delta, eps, cfg.seed, i); });
    return out;
}

RenewalEstimate estimate_from_samples(const LevyModel& model, double delta, const std::vector<double>& samples) {
    RenewalEstimate est;
    est.delta = delta;
    est.n_samples = samples.size();
    const Summary s = summarize(samples);
    est.U_hat = s.mean;
    est.var_hat = s.variance;
    est.se_U = s.se_mean;
    est.m3_hat = central_abs_moment(samples, s.mean, 3.0);
    est.m4_hat = central_abs_moment(samples, s.mean, 4.0);
    const double n = static_cast<double>(std::max<std::size_t>(samples.size(), 1));
    est.se_var = std::sqrt(std::max(0.0, est.m4_hat - est.var_hat * est.var_hat) / n);
    est.closed_form_U = closed_form_renewal(model, delta);
    est.degenerate = est.var_hat == 0.0;
    est.insufficient_samples = est.degenerate && model.infinite_measure();
    return est;
}

RenewalEstimate estimate_renewal(const LevyModel& model, double delta, std::size_t n, const RenewalConfig& cfg) {
    if (n < 100) throw ConfigError("estimate_renewal: need at least 100 samples");
    return estimate_from_samples(model, delta, sample_T_batch(model, delta, n, cfg));
}

CltNormalizers clt_normalizers(const RenewalEstimate& est) {
    CltNormalizers c;
    const double U = est.U_hat;
    if (!(U > 0.0)) throw DomainError("clt_normalizers: U_hat must be positive");
    c.a = 1.0 / U;
    c.se_a = est.se_U / (U * U);
    c.b = std::pow(U, -1.5) * std::sqrt(est.var_hat);
    if (est.var_hat > 0.0) {
        const double rel = std::hypot(1.5 * est.se_U / U, 0.5 * est.se_var / est.var_hat);
        c.se_b = c.b * rel;
    }
    return c;
}

namespace {

std::vector<double> log_inverse_grid(const std::vector<double>& deltas) {
    std::vector<double> x;
    x.reserve(deltas.size());
    for (double d : deltas) x.push_back(-std::log10(d));
    return x;
}

}  // namespace

MomentRatioTable moment_ratio_probe(const LevyModel& model, const std::vector<double>& deltas, int m, std::size_t n,
                                    const RenewalConfig& cfg) {
    if (m < 1 || m > 3) throw DomainError("moment_ratio_probe: m must be 1, 2 or 3");
    if (deltas.size() < 2) throw DomainError("moment_ratio_probe: need at least two deltas");
    MomentRatioTable table;
    table.m = m;
    std::vector<double> ratios, weights;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        RenewalConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, k);
        const auto ts = sample_T_batch(model, deltas[k], n, sub);
        std::vector<double> pw(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) pw[i] = std::pow(ts[i], m);
        const Summary A = summarize(pw);
        const Summary B = summarize(ts);
        NeumaierSum cov;
        for (std::size_t i = 0; i < ts.size(); ++i) cov.add((pw[i] - A.mean) * (ts[i] - B.mean));
        const double nn = static_cast<double>(ts.size());
        const double cab = cov.value() / (nn - 1.0);
        const double r = A.mean / std::pow(B.mean, m);
        const double rel2 = A.variance / (A.mean * A.mean) + m * m * B.variance / (B.mean * B.mean) -
                            2.0 * m * cab / (A.mean * B.mean);
        const double se = r * std::sqrt(std::max(0.0, rel2) / nn);
        table.rows.push_back({deltas[k], r, se});
        table.max_ratio = std::max(table.max_ratio, r);
        ratios.push_back(r);
        weights.push_back(se > 0.0 ? 1.0 / (se * se) : 1.0);
    }
    const bool exact = std::all_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.se == 0.0; });
    table.trend = exact ? linear_fit(log_inverse_grid(deltas), ratios) : linear_fit(log_inverse_grid(deltas), ratios, weights);
    return table;
}

VarianceGrowthProbe variance_growth_probe(const LevyModel& model, const std::vector<double>& deltas, std::size_t n,
                                          const RenewalConfig& cfg) {
    if (deltas.size() < 2) throw DomainError("variance_growth_probe: need at least two deltas");
    VarianceGrowthProbe probe;
    std::vector<double> logs, weights;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        RenewalConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, 1000 + k);
        const auto est = estimate_renewal(model, deltas[k], n, sub);
        if (!(est.var_hat > 0.0)) throw SimulationError("variance_growth_probe: zero sample variance");
        const double q = std::pow(est.U_hat, 7.0 / 3.0) / est.var_hat;
        const double se = std::hypot(7.0 / 3.0 * est.se_U / est.U_hat, est.se_var / est.var_hat);
        probe.rows.push_back({deltas[k], est.U_hat, est.var_hat, q, se});
        logs.push_back(std::log(q));
        weights.push_back(1.0 / (se * se));
    }
    probe.trend = linear_fit(log_inverse_grid(deltas), logs, weights);
    return probe;
}

}  // namespace boxdim
