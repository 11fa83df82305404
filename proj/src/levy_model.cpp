#include "boxdim/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boxdim/errors.hpp"
#include "boxdim/quadrature.hpp"
#include "boxdim/special.hpp"

namespace boxdim {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTinyX = 1e-300;
constexpr double kHugeX = 1e300;

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

double anchor_for(const LevyModel& model, double scale) {
    double a = scale;
    for (double b : model.breakpoints()) {
        if (b < a) a = b;
    }
    return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// LevyModel

LevyModel::LevyModel(double drift, LevyFamily family, std::string description)
    : drift_(drift), family_(std::move(family)), description_(std::move(description)) {
    if (!(drift >= 0.0) || !std::isfinite(drift)) throw DomainError("drift must be non-negative");
}

LevyModel LevyModel::stable(double alpha, double drift) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable index must lie in (0,1)");
    return LevyModel(drift, StableFamily{alpha},
                     "stable(alpha=" + fmt_double(alpha) + ",drift=" + fmt_double(drift) + ")");
}

LevyModel LevyModel::gamma(double rate, double shape, double drift) {
    require_positive(rate, "gamma rate");
    require_positive(shape, "gamma shape");
    return LevyModel(drift, GammaFamily{rate, shape},
                     "gamma(rate=" + fmt_double(rate) + ",shape=" + fmt_double(shape) +
                         ",drift=" + fmt_double(drift) + ")");
}

LevyModel LevyModel::truncated_stable(double alpha, double cut, double drift) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable index must lie in (0,1)");
    require_positive(cut, "truncation cut");
    return LevyModel(drift, TruncatedStableFamily{alpha, cut},
                     "truncated_stable(alpha=" + fmt_double(alpha) + ",cut=" + fmt_double(cut) +
                         ",drift=" + fmt_double(drift) + ")");
}

LevyModel LevyModel::custom(std::string name, std::function<double(double)> tail_fn,
                            std::function<double(double)> tail_inverse_fn, double drift) {
    if (!tail_fn) throw ConfigError("custom model requires a tail function");
    std::string desc = "custom(" + name + ",drift=" + fmt_double(drift) + ")";
    return LevyModel(drift, CustomFamily{std::move(name), std::move(tail_fn), std::move(tail_inverse_fn)},
                     std::move(desc));
}

LevyModel LevyModel::drift_only(double drift) {
    return LevyModel(drift, NoJumpsFamily{}, "drift_only(drift=" + fmt_double(drift) + ")");
}

std::optional<double> LevyModel::stable_index() const {
    if (auto s = std::get_if<StableFamily>(&family_)) return s->alpha;
    if (auto s = std::get_if<TruncatedStableFamily>(&family_)) return s->alpha;
    return std::nullopt;
}

bool LevyModel::infinite_measure() const { return std::isinf(tail_at_zero(*this)); }

std::optional<double> LevyModel::density(double x) const {
    return std::visit(
        overloaded{
            [](const NoJumpsFamily&) -> std::optional<double> { return 0.0; },
            [x](const StableFamily& s) -> std::optional<double> {
                return s.alpha / gamma_fn(1.0 - s.alpha) * std::pow(x, -1.0 - s.alpha);
            },
            [x](const GammaFamily& g) -> std::optional<double> {
                return g.shape * std::exp(-g.rate * x) / x;
            },
            [x](const TruncatedStableFamily& s) -> std::optional<double> {
                if (x >= s.cut) return 0.0;
                return s.alpha / gamma_fn(1.0 - s.alpha) * std::pow(x, -1.0 - s.alpha);
            },
            [](const CustomFamily&) -> std::optional<double> { return std::nullopt; },
        },
        family_);
}

bool LevyModel::has_density() const { return !std::holds_alternative<CustomFamily>(family_); }

std::vector<double> LevyModel::breakpoints() const {
    if (auto s = std::get_if<TruncatedStableFamily>(&family_)) return {s->cut};
    return {};
}

// ---------------------------------------------------------------------------
// Tail and closed forms

double tail(const LevyModel& model, double x) {
    if (!(x > 0.0)) throw DomainError("tail requires x > 0");
    return std::visit(
        overloaded{
            [](const NoJumpsFamily&) { return 0.0; },
            [x](const StableFamily& s) { return std::pow(x, -s.alpha) / gamma_fn(1.0 - s.alpha); },
            [x](const GammaFamily& g) { return g.shape * exp_integral_e1(g.rate * x); },
            [x](const TruncatedStableFamily& s) {
                if (x >= s.cut) return 0.0;
                return (std::pow(x, -s.alpha) - std::pow(s.cut, -s.alpha)) / gamma_fn(1.0 - s.alpha);
            },
            [x](const CustomFamily& c) { return c.tail(x); },
        },
        model.family());
}

double tail_at_zero(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const NoJumpsFamily&) { return 0.0; },
                          [](const CustomFamily& c) {
                              // A tail still growing between 1e-150 and 1e-300 is treated as unbounded.
                              const double near = c.tail(kTinyX);
                              const double mid = c.tail(1e-150);
                              return near > mid * (1.0 + 1e-9) ? kInf : near;
                          },
                          [](const auto&) { return kInf; },
                      },
                      model.family());
}

double integrated_tail(const LevyModel& model, double delta) {
    require_positive(delta, "delta");
    return std::visit(
        overloaded{
            [](const NoJumpsFamily&) { return 0.0; },
            [delta](const StableFamily& s) { return std::pow(delta, 1.0 - s.alpha) / gamma_fn(2.0 - s.alpha); },
            [delta](const GammaFamily& g) {
                const double ad = g.rate * delta;
                return g.shape * (delta * exp_integral_e1(ad) - std::expm1(-ad) / g.rate);
            },
            [delta](const TruncatedStableFamily& s) {
                const double m = std::min(delta, s.cut);
                return (std::pow(m, 1.0 - s.alpha) / (1.0 - s.alpha) - m * std::pow(s.cut, -s.alpha)) /
                       gamma_fn(1.0 - s.alpha);
            },
            [&model, delta](const CustomFamily&) { return numeric::integrated_tail(model, delta); },
        },
        model.family());
}

double mu(const LevyModel& model, double delta) {
    return (model.drift() + integrated_tail(model, delta)) / delta;
}

double truncated_moment(const LevyModel& model, double delta, int k) {
    require_positive(delta, "delta");
    if (k < 1 || k > 3) throw DomainError("truncated_moment supports k in {1,2,3}");
    return std::visit(
        overloaded{
            [](const NoJumpsFamily&) { return 0.0; },
            [delta, k](const StableFamily& s) {
                return s.alpha * std::pow(delta, k - s.alpha) / ((k - s.alpha) * gamma_fn(1.0 - s.alpha));
            },
            [delta, k](const GammaFamily& g) {
                return g.shape * lower_incomplete_gamma(k, g.rate * delta) / std::pow(g.rate, k);
            },
            [delta, k](const TruncatedStableFamily& s) {
                const double m = std::min(delta, s.cut);
                return s.alpha * std::pow(m, k - s.alpha) / ((k - s.alpha) * gamma_fn(1.0 - s.alpha));
            },
            [&model, delta, k](const CustomFamily&) { return numeric::truncated_moment(model, delta, k); },
        },
        model.family());
}

VScale v_scale(const LevyModel& model, double delta) {
    require_positive(delta, "delta");
    if (!model.has_jumps()) return {0.0, true};
    const double second = truncated_moment(model, delta, 2) + delta * delta * tail(model, delta);
    return {std::sqrt(second) / delta, false};
}

double laplace_exponent(const LevyModel& model, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("laplace_exponent requires lambda >= 0");
    if (lambda == 0.0) return 0.0;
    const double d = model.drift();
    return std::visit(overloaded{
                          [&](const NoJumpsFamily&) { return d * lambda; },
                          [&](const StableFamily& s) { return d * lambda + std::pow(lambda, s.alpha); },
                          [&](const GammaFamily& g) { return d * lambda + g.shape * std::log1p(lambda / g.rate); },
                          [&](const auto&) { return numeric::laplace_exponent(model, lambda); },
                      },
                      model.family());
}

double shortened_exponent(const LevyModel& model, double delta, double u) {
    require_positive(delta, "delta");
    if (!(u >= 0.0)) throw DomainError("shortened_exponent requires u >= 0");
    return numeric::shortened_exponent(model, delta, u);
}

double tail_inverse(const LevyModel& model, double p) {
    if (!(p > 0.0) || !(p < tail_at_zero(model))) {
        throw DomainError("tail_inverse: p must lie in (0, tail(0+))");
    }
    return std::visit(
        overloaded{
            [&](const StableFamily& s) { return std::pow(p * gamma_fn(1.0 - s.alpha), -1.0 / s.alpha); },
            [&](const TruncatedStableFamily& s) {
                return std::pow(p * gamma_fn(1.0 - s.alpha) + std::pow(s.cut, -s.alpha), -1.0 / s.alpha);
            },
            [&](const CustomFamily& c) {
                if (c.tail_inverse) return c.tail_inverse(p);
                return numeric::tail_inverse(model, p);
            },
            [&](const auto&) { return numeric::tail_inverse(model, p); },
        },
        model.family());
}

double ShortenedModel::moment(int k) const {
    return truncated_moment(base, delta, k) + std::pow(delta, k) * tail(base, delta);
}

// ---------------------------------------------------------------------------
// Condition (2) probe

Condition2Table check_condition_2(const LevyModel& model, const std::vector<double>& deltas,
                                  GrowthFunction fn) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        require_positive(deltas[i], "delta");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw DomainError("delta grid must be strictly decreasing");
    }
    auto F = [&](double x) {
        return fn == GrowthFunction::integrated_tail ? integrated_tail(model, x) : truncated_moment(model, x, 1);
    };
    Condition2Table table;
    if (!model.has_jumps()) {
        table.applicable = false;
        return table;
    }
    for (double d : deltas) {
        const double denom = F(d);
        if (denom == 0.0) {
            table.applicable = false;
            table.rows.clear();
            return table;
        }
        table.rows.push_back({d, F(2.0 * d) / denom});
    }
    if (!table.rows.empty()) {
        const std::size_t half = table.rows.size() / 2;
        double m = kInf;
        for (std::size_t i = half; i < table.rows.size(); ++i) m = std::min(m, table.rows[i].ratio);
        table.liminf_estimate = m;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Quadrature route

namespace numeric {

double integrated_tail(const LevyModel& model, double delta) {
    require_positive(delta, "delta");
    if (!model.has_jumps()) return 0.0;
    return integrate_log_scale([&](double x) { return tail(model, x); }, 0.0, delta, anchor_for(model, delta));
}

double truncated_moment(const LevyModel& model, double delta, int k) {
    require_positive(delta, "delta");
    if (k < 1 || k > 3) throw DomainError("truncated_moment supports k in {1,2,3}");
    if (!model.has_jumps()) return 0.0;
    // ∫_(0,δ] x^k Π(dx) = ∫₀^δ k x^(k−1) Π̄(x) dx − δ^k Π̄(δ)
    const double body = integrate_log_scale(
        [&](double x) { return k * std::pow(x, k - 1) * tail(model, x); }, 0.0, delta, anchor_for(model, delta));
    return std::max(0.0, body - std::pow(delta, k) * tail(model, delta));
}

double laplace_exponent(const LevyModel& model, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("laplace_exponent requires lambda >= 0");
    if (lambda == 0.0) return 0.0;
    double jumps = 0.0;
    if (model.has_jumps()) {
        jumps = integrate_log_scale([&](double x) { return lambda * std::exp(-lambda * x) * tail(model, x); },
                                    0.0, kInf, anchor_for(model, 1.0 / lambda));
    }
    return model.drift() * lambda + jumps;
}

double shortened_exponent(const LevyModel& model, double delta, double u) {
    require_positive(delta, "delta");
    if (!(u >= 0.0)) throw DomainError("shortened_exponent requires u >= 0");
    if (u == 0.0) return 0.0;
    double jumps = 0.0;
    if (model.has_jumps()) {
        jumps = integrate_log_scale([&](double x) { return u * std::exp(-u * x) * tail(model, x); }, 0.0, delta,
                                    anchor_for(model, std::min(delta, 1.0 / u)));
    }
    return model.drift() * u + jumps;
}

double shortened_slope(const LevyModel& model, double delta, double u) {
    require_positive(delta, "delta");
    if (!(u >= 0.0)) throw DomainError("shortened_slope requires u >= 0");
    if (!model.has_jumps()) return model.drift();
    const double anchor = anchor_for(model, u > 0.0 ? std::min(delta, 1.0 / u) : delta);
    const double body = integrate_log_scale(
        [&](double x) { return (1.0 - u * x) * std::exp(-u * x) * tail(model, x); }, 0.0, delta, anchor);
    return model.drift() + body;
}

double shortened_remainder(const LevyModel& model, double delta, double u) {
    require_positive(delta, "delta");
    if (!(u >= 0.0)) throw DomainError("shortened_remainder requires u >= 0");
    if (u == 0.0 || !model.has_jumps()) return 0.0;
    return integrate_log_scale([&](double x) { return u * u * x * std::exp(-u * x) * tail(model, x); }, 0.0,
                               delta, anchor_for(model, std::min(delta, 1.0 / u)));
}

double tail_inverse(const LevyModel& model, double p) {
    if (!(p > 0.0)) throw DomainError("tail_inverse: p must be positive");
    // inf{x : Π̄(x) <= p}; bisection in log x on [1e-300, 1e300].
    double lo = kTinyX;
    double hi = kHugeX;
    if (!(tail(model, lo) > p)) throw DomainError("tail_inverse: p must be below tail(0+)");
    if (tail(model, hi) > p) throw DomainError("tail_inverse: tail does not fall below p");
    while (hi / lo - 1.0 > 1e-13) {
        const double mid = std::sqrt(lo) * std::sqrt(hi);
        if (mid <= lo || mid >= hi) break;
        if (tail(model, mid) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace numeric

// ---------------------------------------------------------------------------
// Built-in custom tails

std::vector<std::string> builtin_tail_names() { return {"stable_half", "log_inverse"}; }

LevyModel builtin_custom_model(const std::string& name, double drift) {
    if (name == "stable_half") {
        // Same measure as Stable(1/2), supplied through its tail only.
        const double c = 1.0 / std::sqrt(std::acos(-1.0));
        return LevyModel::custom(
            name, [c](double x) { return c / std::sqrt(x); }, {}, drift);
    }
    if (name == "log_inverse") {
        // Π̄(x) = log(1 + 1/x): infinite mass, ∫₀¹ Π̄ < ∞, Π̄(x) ~ 1/x at infinity.
        return LevyModel::custom(
            name, [](double x) { return std::log1p(1.0 / x); },
            [](double p) { return 1.0 / std::expm1(p); }, drift);
    }
    throw ConfigError("unknown built-in tail '" + name + "'");
}

}  // namespace boxdim
