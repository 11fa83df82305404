#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boxdim/levy_model.hpp"
#include "boxdim/stats.hpp"

namespace boxdim {

struct RenewalConfig {
    std::uint64_t seed = 0;
    std::optional<double> cutoff;  // empty: auto rule with δ_min = δ
    double cutoff_scale = 1.0;
    unsigned threads = 1;
};

/// Exact U(δ) where known: δ^α/Γ(1+α) for Stable(α) without drift, δ/d for pure drift.
std::optional<double> closed_form_renewal(const LevyModel& model, double delta);
/// Closed form when available, δ/(d + I(δ)) otherwise.
double renewal_ballpark(const LevyModel& model, double delta);
double renewal_cutoff(const LevyModel& model, double delta, const RenewalConfig& cfg);

/// One draw of T_δ, the first time the path strictly exceeds δ.  Events are
/// streamed in chunks over doubling horizons starting at 10·ballpark.
double sample_T(const LevyModel& model, double delta, double cutoff, std::uint64_t seed, std::uint64_t replica);
std::vector<double> sample_T_batch(const LevyModel& model, double delta, std::size_t n, const RenewalConfig& cfg);

struct RenewalEstimate {
    double delta = 0.0;
    std::size_t n_samples = 0;
    double U_hat = 0.0;
    double var_hat = 0.0;
    double m3_hat = 0.0;  // E|T − U|³
    double m4_hat = 0.0;  // E(T − U)⁴
    double se_U = 0.0;
    double se_var = 0.0;
    std::optional<double> closed_form_U;
    bool degenerate = false;           // var_hat == 0 (deterministic T)
    bool insufficient_samples = false;  // var_hat == 0 although Π is infinite
};

RenewalEstimate estimate_from_samples(const LevyModel& model, double delta, const std::vector<double>& samples);
/// n >= 100 draws of T_δ.
RenewalEstimate estimate_renewal(const LevyModel& model, double delta, std::size_t n, const RenewalConfig& cfg);

struct CltNormalizers {
    double a = 0.0;  // 1/U
    double b = 0.0;  // U^(−3/2) σ
    double se_a = 0.0;
    double se_b = 0.0;  // first-order propagation of se_U and se_var
};
CltNormalizers clt_normalizers(const RenewalEstimate& est);

struct MomentRatioRow {
    double delta;
    double ratio;  // mean(T^m) / mean(T)^m
    double se;
};
struct MomentRatioTable {
    int m = 2;
    std::vector<MomentRatioRow> rows;
    double max_ratio = 0.0;
    LinearFit trend;  // ratio against log10(1/δ)
    /// No upward trend: slope − 2·se_slope <= 0.
    bool bounded() const { return trend.slope - 2.0 * trend.se_slope <= 0.0; }
};
/// E[T_δ^m]/U(δ)^m along a δ grid, independent draws per δ.
MomentRatioTable moment_ratio_probe(const LevyModel& model, const std::vector<double>& deltas, int m, std::size_t n,
                                    const RenewalConfig& cfg);

struct VarianceGrowthRow {
    double delta;
    double U_hat;
    double var_hat;
    double q;         // U^(7/3) / σ²
    double se_log_q;  // first order, covariance ignored
};
struct VarianceGrowthProbe {
    std::vector<VarianceGrowthRow> rows;
    LinearFit trend;  // log q against log10(1/δ), weighted
    /// Strictly decreasing towards small δ beyond the CI: slope + 2·se_slope < 0.
    bool decreasing() const { return trend.slope + 2.0 * trend.se_slope < 0.0; }
};
VarianceGrowthProbe variance_growth_probe(const LevyModel& model, const std::vector<double>& deltas, std::size_t n,
                                          const RenewalConfig& cfg);

}  // namespace boxdim
