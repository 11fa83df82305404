#include <doctest.h>

#include <cmath>

#include "boxdim/errors.hpp"
#include "boxdim/experiments.hpp"
#include "boxdim/report.hpp"
#include "boxdim/special.hpp"

using namespace boxdim;

namespace {
ExperimentConfig small(ExperimentKind kind, const LevyModel& m) {
    auto c = default_config(kind);
    c.model = m;
    c.deltas = {1e-1, 1e-2, 1e-3};
    c.n_paths = 100;
    c.renewal_n = 2000;
    c.escalation_deltas.clear();
    return c;
}
}  // namespace

TEST_CASE("default configurations") {
    const auto lln = default_config(ExperimentKind::lln_N);
    CHECK(lln.n_paths == 200);
    CHECK(lln.deltas == std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4});
    CHECK(default_config(ExperimentKind::clt_L).n_paths == 2000);
    CHECK(default_config(ExperimentKind::clt_N).n_paths == 2000);
    CHECK(default_config(ExperimentKind::ratio_NL).deltas.back() == 1e-5);
}

TEST_CASE("drift-only LLN is exact") {
    const auto m = LevyModel::drift_only(1.0);
    const auto n = run_lln_N(small(ExperimentKind::lln_N, m));
    for (const auto& r : n.rows) {
        if (r.statistic == "mean_UN") CHECK(std::abs(r.value - 1.0) <= r.delta);
    }
    const auto l = run_lln_L(small(ExperimentKind::lln_L, m));
    for (const auto& r : l.rows) {
        if (r.statistic == "mean_L_over_mu") CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(l.passed());
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(run_clt_N(small(ExperimentKind::clt_N, LevyModel::drift_only(1.0))), ConfigError);
    CHECK_THROWS_AS(run_clt_N(small(ExperimentKind::clt_N, LevyModel::stable(0.5, 0.5))), ConfigError);
    CHECK_THROWS_AS(run_clt_L(small(ExperimentKind::clt_L, LevyModel::drift_only(1.0))), ConfigError);
    auto c = small(ExperimentKind::lln_N, LevyModel::stable(0.5));
    c.n_paths = 99;
    CHECK_THROWS_AS(run_lln_N(c), ConfigError);
    c = small(ExperimentKind::lln_N, LevyModel::stable(0.5));
    c.deltas = {1e-2, 1e-1};
    CHECK_THROWS_AS(run_lln_N(c), ConfigError);
    c.deltas = {1e-2};
    c.cutoff = 1e-3;
    CHECK_THROWS_AS(run_lln_N(c), ConfigError);
    const auto finite = LevyModel::custom("exp", [](double x) { return std::exp(-x); });
    CHECK_THROWS_AS(mu_subsequence(finite, 0.5, 1e-4, 1e-1), ConfigError);
}

TEST_CASE("mu subsequence and ratio horizon") {
    const auto m = LevyModel::stable(0.5);
    const auto s = mu_subsequence(m, 0.5, 1e-4, 1e-1);
    REQUIRE(s.size() >= 5);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double n = std::round(std::log2(mu(m, s[i])));
        CHECK(mu(m, s[i]) == doctest::Approx(std::exp2(n)).epsilon(1e-12));
        if (i > 0) CHECK(s[i] < s[i - 1]);
    }
    CHECK(ratio_horizon(LevyModel::stable(0.3), 1.0, 1e-5, 100) == 10.0);
    CHECK(ratio_horizon(LevyModel::stable(0.5), 1.0, 1e-5, 100) == 1.0);
}

TEST_CASE("reports do not depend on the thread count") {
    for (auto kind : {ExperimentKind::lln_N, ExperimentKind::lln_L, ExperimentKind::clt_N, ExperimentKind::graph_identity}) {
        auto c = small(kind, kind == ExperimentKind::graph_identity ? LevyModel::stable(0.5, 0.5)
                                                                      : LevyModel::gamma(1, 1));
        c.seed = 21;
        c.threads = 1;
        const auto a = report_csv(run_experiment(kind, c));
        c.threads = 4;
        const auto b = report_csv(run_experiment(kind, c));
        CHECK(a == b);
    }
}

TEST_CASE("experiment rows on a small stable campaign") {
    auto c = small(ExperimentKind::lln_L, LevyModel::stable(0.5));
    const auto rep = run_lln_L(c);
    bool has_sandwich = false;
    for (const auto& r : rep.rows) {
        if (r.statistic == "sandwich_paths") {
            has_sandwich = true;
            CHECK(r.value == 1.0);
        }
        if (r.statistic == "monotone_L_paths") CHECK(r.value == 1.0);
    }
    CHECK(has_sandwich);

    const auto g = run_graph_identity(small(ExperimentKind::graph_identity, LevyModel::stable(0.5, 1.0)));
    for (const auto& r : g.rows) {
        if (r.statistic == "mesh_identity_paths" || r.statistic == "NG_equals_N_paths") CHECK(r.value == 1.0);
    }
}

TEST_CASE("condition2 report") {
    const auto s = run_condition2(LevyModel::stable(0.5));
    CHECK(s.passed());
    for (const auto& r : s.rows) {
        if (r.verdict != "INFO") CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    }
    const auto d = run_condition2(LevyModel::drift_only(1.0));
    bool noted = false;
    for (const auto& n : d.notes) noted = noted || n.find("condition vacuous / not applicable") != std::string::npos;
    CHECK(noted);
}

TEST_CASE("renewal table") {
    const auto rep = run_renewal_table(LevyModel::stable(0.5), {1e-2, 1e-3}, 5000, 3, 1);
    CHECK(rep.passed());
    REQUIRE(rep.tables.size() == 1);
    CHECK(rep.tables[0].second.rfind("delta,n,U_hat,se_U,var_hat,m3_hat,a,b,closed_form_U\n", 0) == 0);
}
