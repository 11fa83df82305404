#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boxdim/levy_model.hpp"
#include "boxdim/stats.hpp"

namespace boxdim {

/// g(u) = d/du Φ̃^δ(u) = d + ∫₀^δ x e^(−ux) Π̃^δ(dx).
/// Closed forms for stable and gamma, density quadrature otherwise.
double jp_g(const LevyModel& model, double delta, double u);
/// R(u) = Φ̃^δ(u) − u g(u) = ∫₀^δ (1 − e^(−ux)(1+ux)) Π̃^δ(dx), evaluated
/// without cancellation.
double jp_R(const LevyModel& model, double delta, double u);

/// Unique λ with g(λ) = x.  Requires d < x < g(0) = d + I(δ); bisection in
/// log u to relative 1e-13.
double solve_lambda(const LevyModel& model, double delta, double x_target);

struct JPState {
    double delta = 0.0;
    double lambda = 0.0;
    double g_val = 0.0;
    double R_val = 0.0;
    double x_target = 0.0;
    double t_used = 0.0;       // (1 + alpha_param) U(δ)
    double alpha_param = 0.0;
};
/// State at t = (1+α)U, x = δ/t.
JPState jp_state(const LevyModel& model, double delta, double alpha_param, double U);

struct DeltaLambdaRow {
    double delta;
    double U;
    double t;
    double x_target;
    bool in_bracket;
    double lambda;        // NaN when out of bracket
    double delta_lambda;
    double R;
    double tR;
    double tR_bound;      // (1+α) U I(δ) λ
};
struct DeltaLambdaProbe {
    std::vector<DeltaLambdaRow> rows;
    LinearFit trend;           // δλ against log10(1/δ)
    double mean = 0.0;
    double relative_spread = 0.0;  // max/min − 1 over rows in bracket
    double trend_tolerance = 0.05; // allowed upward drift per decade, relative to the mean
    bool all_in_bracket() const;
    /// No upward trend beyond tolerance: slope − 2 se <= tolerance · mean.
    bool bounded() const;
};
/// δ·λ_δ along a δ grid.  `U_values` (one per δ) default to the closed form.
/// Π ≡ 0 is rejected with DomainError.
DeltaLambdaProbe delta_lambda_probe(const LevyModel& model, double alpha_param, const std::vector<double>& deltas,
                                    const std::vector<double>& U_values = {});

/// (1 − (1+ε)c/(ε² tR(λ))) e^(−(1+2ε) tR(λ)) clamped at 0, with x = δ/t.
double jp_lower_bound(const LevyModel& model, double delta, double t, double eps_jp, double c_const);

struct EmpiricalProbability {
    double p_hat = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};
/// Monte Carlo estimate of P(X̃_t^δ <= δ) from n skeletons on [0, t].
EmpiricalProbability jp_empirical(const LevyModel& model, double delta, double t, std::size_t n, std::uint64_t seed,
                                  unsigned threads = 1, double cutoff_scale = 1.0);

}  // namespace boxdim
