#include "boxdim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boxdim/errors.hpp"
#include "boxdim/path_engine.hpp"
#include "boxdim/quadrature.hpp"
#include "boxdim/renewal.hpp"
#include "boxdim/special.hpp"

namespace boxdim {

double jp_g(const LevyModel& model, double delta, double u) {
    if (!(delta > 0.0)) throw DomainError("g: delta must be positive");
    if (!(u >= 0.0)) throw DomainError("g: u must be non-negative");
    const double d = model.drift();
    if (!model.has_jumps()) return d;
    const double atom = delta * std::exp(-u * delta) * tail(model, delta);
    if (model.is_stable()) {
        const double a = *model.stable_index();
        const double c = 1.0 / gamma_fn(1.0 - a);
        const double body = u == 0.0 ? a * c * std::pow(delta, 1.0 - a) / (1.0 - a)
                                     : a * c * std::pow(u, a - 1.0) * lower_incomplete_gamma(1.0 - a, u * delta);
        return d + body + atom;
    }
    if (auto gf = std::get_if<GammaFamily>(&model.family())) {
        const double k = gf->rate + u;
        return d + gf->shape * -std::expm1(-k * delta) / k + atom;
    }
    if (model.has_density()) {
        // split at density discontinuities (truncation cuts) below δ
        auto f = [&](double x) { return x * std::exp(-u * x) * *model.density(x); };
        double lo = 0.0, body = 0.0;
        auto piece = [&](double hi) {
            const double anchor = std::min(hi, u > 0.0 ? std::max(lo, std::min(hi, 1.0 / u)) : hi);
            body += integrate_log_scale(f, lo, hi, anchor);
            lo = hi;
        };
        for (double b : model.breakpoints()) {
            if (b > lo && b < delta) piece(b);
        }
        piece(delta);
        return d + body + atom;
    }
    return numeric::shortened_slope(model, delta, u);
}

double jp_R(const LevyModel& model, double delta, double u) {
    if (!(delta > 0.0)) throw DomainError("R: delta must be positive");
    if (!(u >= 0.0)) throw DomainError("R: u must be non-negative");
    if (u == 0.0 || !model.has_jumps()) return 0.0;
    if (model.is_stable()) {
        const double a = *model.stable_index();
        return std::pow(u, a) * lower_incomplete_gamma(2.0 - a, u * delta) / gamma_fn(1.0 - a);
    }
    return numeric::shortened_remainder(model, delta, u);
}

double solve_lambda(const LevyModel& model, double delta, double x_target) {
    const double g_inf = model.drift();
    const double g_zero = jp_g(model, delta, 0.0);
    if (!(x_target > g_inf && x_target < g_zero)) {
        std::ostringstream os;
        os.precision(17);
        os << "solve_lambda: target " << x_target << " outside the bracket (" << g_inf << ", " << g_zero << ")";
        throw DomainError(os.str());
    }
    double lo = 1.0 / delta;
    double hi = lo;
    for (int i = 0; jp_g(model, delta, lo) <= x_target; ++i) {
        if (i > 600) throw PrecisionError("solve_lambda: cannot bracket from below");
        lo *= 0.25;
    }
    for (int i = 0; jp_g(model, delta, hi) >= x_target; ++i) {
        if (i > 600) throw PrecisionError("solve_lambda: cannot bracket from above");
        hi *= 4.0;
    }
    for (int i = 0; i < 400 && hi / lo - 1.0 > 1e-13; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (jp_g(model, delta, mid) > x_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

JPState jp_state(const LevyModel& model, double delta, double alpha_param, double U) {
    if (!(alpha_param > 0.0) || !(U > 0.0)) throw DomainError("jp_state: alpha_param and U must be positive");
    JPState s;
    s.delta = delta;
    s.alpha_param = alpha_param;
    s.t_used = (1.0 + alpha_param) * U;
    s.x_target = delta / s.t_used;
    s.lambda = solve_lambda(model, delta, s.x_target);
    s.g_val = jp_g(model, delta, s.lambda);
    s.R_val = jp_R(model, delta, s.lambda);
    return s;
}

bool DeltaLambdaProbe::all_in_bracket() const {
    return std::all_of(rows.begin(), rows.end(), [](const DeltaLambdaRow& r) { return r.in_bracket; });
}

bool DeltaLambdaProbe::bounded() const {
    return all_in_bracket() && trend.slope - 2.0 * trend.se_slope <= trend_tolerance * mean;
}

DeltaLambdaProbe delta_lambda_probe(const LevyModel& model, double alpha_param, const std::vector<double>& deltas,
                                    const std::vector<double>& U_values) {
    if (!model.has_jumps()) throw DomainError("delta_lambda_probe: no jumps, the bracket is empty");
    if (!U_values.empty() && U_values.size() != deltas.size()) {
        throw DomainError("delta_lambda_probe: one U value per delta required");
    }
    DeltaLambdaProbe probe;
    std::vector<double> xs, ys;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    NeumaierSum sum;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        double U;
        if (!U_values.empty()) {
            U = U_values[k];
        } else if (auto cf = closed_form_renewal(model, delta)) {
            U = *cf;
        } else {
            throw DomainError("delta_lambda_probe: no closed-form U for this model; pass estimates");
        }
        DeltaLambdaRow row{};
        row.delta = delta;
        row.U = U;
        row.t = (1.0 + alpha_param) * U;
        row.x_target = delta / row.t;
        row.in_bracket = row.x_target > model.drift() && row.x_target < jp_g(model, delta, 0.0);
        row.lambda = row.delta_lambda = row.R = row.tR = row.tR_bound = std::nan("");
        if (row.in_bracket) {
            row.lambda = solve_lambda(model, delta, row.x_target);
            row.delta_lambda = delta * row.lambda;
            row.R = jp_R(model, delta, row.lambda);
            row.tR = row.t * row.R;
            row.tR_bound = (1.0 + alpha_param) * U * integrated_tail(model, delta) * row.lambda;
            xs.push_back(-std::log10(delta));
            ys.push_back(row.delta_lambda);
            lo = std::min(lo, row.delta_lambda);
            hi = std::max(hi, row.delta_lambda);
            sum.add(row.delta_lambda);
        }
        probe.rows.push_back(row);
    }
    if (xs.size() >= 2) {
        probe.trend = linear_fit(xs, ys);
        probe.mean = sum.value() / static_cast<double>(xs.size());
        probe.relative_spread = hi / lo - 1.0;
    }
    return probe;
}

double jp_lower_bound(const LevyModel& model, double delta, double t, double eps_jp, double c_const) {
    if (!(eps_jp > 0.0) || !(t > 0.0) || !(c_const > 0.0)) {
        throw DomainError("jp_lower_bound: eps, t and c must be positive");
    }
    const double lambda = solve_lambda(model, delta, delta / t);
    const double tR = t * jp_R(model, delta, lambda);
    if (!(tR > 0.0)) return 0.0;
    const double front = 1.0 - (1.0 + eps_jp) * c_const / (eps_jp * eps_jp * tR);
    return std::max(0.0, front) * std::exp(-(1.0 + 2.0 * eps_jp) * tR);
}

EmpiricalProbability jp_empirical(const LevyModel& model, double delta, double t, std::size_t n, std::uint64_t seed,
                                  unsigned threads, double cutoff_scale) {
    if (n == 0) throw DomainError("jp_empirical: n must be positive");
    std::vector<char> hit(n);
    parallel_for(n, threads, [&](std::size_t i) {
        SimConfig cfg;
        cfg.horizon = t;
        cfg.delta_min = delta;
        cfg.cutoff_scale = cutoff_scale;
        cfg.seed = seed;
        cfg.replica = i;
        const auto skel = sample_skeleton(model, cfg);
        hit[i] = value_at(skel, t, PathMode::shortened, delta) <= delta;
    });
    EmpiricalProbability e;
    e.n = n;
    const auto k = std::count(hit.begin(), hit.end(), 1);
    e.p_hat = static_cast<double>(k) / static_cast<double>(n);
    e.se = std::sqrt(std::max(e.p_hat * (1.0 - e.p_hat), 1.0 / static_cast<double>(n)) / static_cast<double>(n));
    return e;
}

}  // namespace boxdim
