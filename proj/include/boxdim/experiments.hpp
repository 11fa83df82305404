#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boxdim/cover_counts.hpp"
#include "boxdim/levy_model.hpp"

namespace boxdim {

enum class ExperimentKind { lln_N, lln_L, clt_N, clt_L, ratio_NL, rv_asymptotics, graph_identity };
std::string kind_name(ExperimentKind kind);

/// Every verdict in a report is traceable to one of these numbers.
struct Tolerances {
    double lln_N_band = 0.02;        // |mean U·N − t| <= band·t
    double lln_L_band = 0.01;        // |mean L/μ − t| <= band·t
    double ks_allowance_L = 0.02;    // added to 1.36/√n
    double ks_allowance_N = 0.04;
    double standardized_mean = 0.1;  // |mean z| <= this
    double standardized_var = 0.1;   // |var z − 1| <= this
    double ratio_rel = 0.03;         // N/L against Γ(2−α)Γ(1+α)
    double rv_L_rel = 0.02;          // L·Γ(2−α)δ^α/t against 1
    double rv_N_rel = 0.03;          // N·δ^α/(Γ(1+α)t) against 1
    double se_multiplier = 4.0;      // calibration rows
    double normalizer_widening = 2.0;  // multiples of the propagated a, b uncertainty
};

struct ExperimentConfig {
    LevyModel model = LevyModel::stable(0.5);
    double t = 1.0;
    std::vector<double> deltas;  // strictly decreasing
    std::size_t n_paths = 200;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::optional<double> cutoff;  // empty: auto from the smallest δ
    double cutoff_scale = 1.0;
    std::size_t renewal_n = 100000;
    double subsequence_r = 0.5;  // lln_L sandwich device
    bool subsequence = true;
    std::vector<double> escalation_deltas = {1e-5, 1e-6};  // clt_N reruns
    bool auto_horizon = true;    // ratio runs: grow t by decades until t/U(δ_min) >= min_boxes
    double min_boxes = 100.0;
    Tolerances tol;
};

/// Defaults per kind (grids, path counts).
ExperimentConfig default_config(ExperimentKind kind);

struct ReportRow {
    std::string experiment;
    double delta = 0.0;
    std::string statistic;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    double stderr_ = 0.0;
    std::string verdict;  // PASS, FAIL, INFO or ESCALATED
};

struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;  // banners such as "hypothesis unverified"
    double runtime_seconds = 0.0;
    /// Extra CSV tables (file name, contents) written next to report.csv.
    std::vector<std::pair<std::string, std::string>> tables;

    bool passed() const;
    const ReportRow* find(const std::string& statistic, double delta) const;
};

/// Skeleton campaign shared by the experiments: one skeleton per path at the
/// smallest δ, all counts evaluated on it for every δ.
struct Campaign {
    double cutoff = 0.0;
    double horizon = 0.0;
    std::vector<double> deltas;
    std::vector<std::vector<CoverResult>> paths;  // [path][delta index]
};
Campaign run_campaign(const LevyModel& model, double t, const std::vector<double>& deltas, std::size_t n_paths,
                      std::uint64_t seed, unsigned threads, std::optional<double> cutoff, double cutoff_scale,
                      bool with_graph = false);

/// δ_n with μ(δ_n) = r^(−n), for all n whose δ_n lies in [lo, hi].
std::vector<double> mu_subsequence(const LevyModel& model, double r, double lo, double hi);
/// Horizon used by ratio runs.
double ratio_horizon(const LevyModel& model, double t, double delta_min, double min_boxes);

ExperimentReport run_lln_N(const ExperimentConfig& cfg);
ExperimentReport run_lln_L(const ExperimentConfig& cfg);
ExperimentReport run_clt_L(const ExperimentConfig& cfg);
ExperimentReport run_clt_N(const ExperimentConfig& cfg);
/// N/L against Γ(2−α)Γ(1+α), plus the rv_asymptotics rows.
ExperimentReport run_ratio_NL(const ExperimentConfig& cfg);
/// L·Γ(2−α)δ^α/t → 1 and N·δ^α/(Γ(1+α)t) → 1.
ExperimentReport run_rv_asymptotics(const ExperimentConfig& cfg);
ExperimentReport run_graph_identity(const ExperimentConfig& cfg);
ExperimentReport run_experiment(ExperimentKind kind, const ExperimentConfig& cfg);

/// Renewal table: U_hat against the closed form where one exists.
ExperimentReport run_renewal_table(const LevyModel& model, const std::vector<double>& deltas, std::size_t n,
                                   std::uint64_t seed, unsigned threads, double cutoff_scale = 1.0);

struct DiagnoseConfig {
    LevyModel model = LevyModel::stable(0.5);
    std::vector<double> deltas = {1e-2, 1e-3, 1e-4, 1e-5};
    double alpha_param = 1.0;
    double c_const = 1.0;
    std::vector<double> eps_grid = {0.1, 0.25, 0.5, 1.0, 2.0};
    double jp_delta = 1e-2;
    std::size_t mc_n = 10000;
    std::size_t renewal_n = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double cutoff_scale = 1.0;
    double constancy_tol = 0.01;  // δλ_δ spread for stable models
    GrowthFunction growth = GrowthFunction::integrated_tail;
};
ExperimentReport run_diagnostics(const DiagnoseConfig& cfg);

/// Condition (2) ratios along δ = 2^−k, k = k_lo..k_hi.
ExperimentReport run_condition2(const LevyModel& model, int k_lo = 5, int k_hi = 20,
                                GrowthFunction fn = GrowthFunction::integrated_tail);

}  // namespace boxdim
