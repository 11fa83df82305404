#include <doctest.h>

#include <cmath>
#include <vector>

#include "boxdim/errors.hpp"
#include "boxdim/levy_model.hpp"
#include "boxdim/renewal.hpp"
#include "boxdim/special.hpp"

using namespace boxdim;

namespace {
std::vector<LevyModel> zoo() {
    return {LevyModel::stable(0.5),          LevyModel::stable(0.3, 0.2),     LevyModel::gamma(1.0, 1.0),
            LevyModel::gamma(3.0, 0.5, 0.1), LevyModel::truncated_stable(0.6, 0.05),
            builtin_custom_model("stable_half"), builtin_custom_model("log_inverse")};
}
}  // namespace

TEST_CASE("tail oracles") {
    const auto st = LevyModel::stable(0.5);
    CHECK(tail(st, 1.0) == doctest::Approx(0.56418958354775629).epsilon(1e-13));
    CHECK(tail(st, 1e12) < 1e-5);
    CHECK(tail(LevyModel::gamma(1, 1), 1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-12));
    CHECK_THROWS_AS(tail(st, 0.0), DomainError);
    CHECK_THROWS_AS(tail(st, -1.0), DomainError);
    CHECK(std::isinf(tail_at_zero(st)));
}

TEST_CASE("integrated tail, mu and v oracles") {
    const auto st = LevyModel::stable(0.5);
    CHECK(integrated_tail(st, 0.01) == doctest::Approx(0.11283791670955126).epsilon(1e-12));
    CHECK(integrated_tail(st, 1e-14) < 1e-6);
    CHECK(integrated_tail(LevyModel::gamma(1, 1), 0.1) == doctest::Approx(0.27745497780597949).epsilon(1e-10));
    CHECK(mu(st, 0.01) == doctest::Approx(11.283791670955126).epsilon(1e-12));
    CHECK(mu(st, 1e-4) == doctest::Approx(112.83791670955126).epsilon(1e-12));
    CHECK(mu(LevyModel::drift_only(1.0), 0.1) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(v(st, 0.01) == doctest::Approx(2.7427226948119911).epsilon(1e-12));
    CHECK(v(LevyModel::gamma(1, 1), 0.1) == doctest::Approx(1.5135415337756138).epsilon(1e-10));
    const auto vd = v_scale(LevyModel::drift_only(1.0), 0.1);
    CHECK(vd.value == 0.0);
    CHECK(vd.degenerate);
}

TEST_CASE("Laplace exponent oracles") {
    CHECK(laplace_exponent(LevyModel::stable(0.5), 4.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(laplace_exponent(LevyModel::gamma(1, 1), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    for (const auto& m : zoo()) CHECK(laplace_exponent(m, 0.0) == 0.0);
}

TEST_CASE("truncated moment oracles") {
    const auto st = LevyModel::stable(0.5);
    CHECK(truncated_moment(st, 0.01, 1) == doctest::Approx(0.056418958354775629).epsilon(1e-12));
    CHECK(truncated_moment(st, 0.01, 2) == doctest::Approx(1.8806319451591876e-4).epsilon(1e-12));
    CHECK(truncated_moment(st, 0.01, 3) == doctest::Approx(1.1283791670955126e-6).epsilon(1e-12));
    CHECK(truncated_moment(LevyModel::drift_only(1.0), 0.01, 2) == 0.0);
    CHECK(truncated_moment(LevyModel::gamma(1, 1), 0.1, 1) == doctest::Approx(0.095162581964040427).epsilon(1e-11));
    CHECK(truncated_moment(LevyModel::gamma(1, 1), 0.1, 2) == doctest::Approx(0.0046788401604444695).epsilon(1e-11));
}

TEST_CASE("tail inverse") {
    const auto st = LevyModel::stable(0.5);
    CHECK(tail_inverse(st, 1.0 / gamma_fn(0.5)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(tail_inverse(st, 4.0 / gamma_fn(0.5)) == doctest::Approx(0.0625).epsilon(1e-13));
    const auto ga = LevyModel::gamma(1, 1);
    CHECK(std::abs(tail_inverse(ga, tail(ga, 0.5)) - 0.5) <= 1e-9);
    CHECK_THROWS_AS(tail_inverse(st, 0.0), DomainError);
    const auto finite = LevyModel::custom("exp", [](double x) { return std::exp(-x); });
    CHECK_THROWS_AS(tail_inverse(finite, 2.0), DomainError);
    // Custom tails without a supplied inverse fall back to bisection.
    const auto cu = LevyModel::custom("pow", [](double x) { return std::pow(x, -0.4); });
    CHECK(tail_inverse(cu, std::pow(0.003, -0.4)) == doctest::Approx(0.003).epsilon(1e-11));
}

TEST_CASE("condition (2) probe") {
    std::vector<double> grid;
    for (int k = 5; k <= 20; ++k) grid.push_back(std::ldexp(1.0, -k));
    const auto st = check_condition_2(LevyModel::stable(0.5), grid);
    for (const auto& r : st.rows) CHECK(r.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(st.liminf_estimate == doctest::Approx(1.4142135623730951).epsilon(1e-12));
    CHECK(st.holds());

    const auto ga = check_condition_2(LevyModel::gamma(1, 1), grid);
    for (const auto& r : ga.rows) {
        CHECK(r.ratio > 1.0);
        CHECK(r.ratio < 2.0);
    }
    CHECK(ga.rows[0].ratio == doctest::Approx(1.6527908685862864).epsilon(1e-9));
    CHECK(ga.rows[5].ratio == doctest::Approx(1.8116429054816902).epsilon(1e-9));
    CHECK(ga.rows[10].ratio == doctest::Approx(1.8718795833229807).epsilon(1e-9));
    CHECK(ga.rows[15].ratio == doctest::Approx(1.9029595575118836).epsilon(1e-9));
    CHECK(ga.holds());

    const auto dr = check_condition_2(LevyModel::drift_only(1.0), grid);
    CHECK_FALSE(dr.applicable);
    CHECK_FALSE(dr.holds());
}

TEST_CASE("invariants across the model zoo") {
    const std::vector<double> grid = {1.0, 0.3, 0.1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    for (const auto& m : zoo()) {
        CAPTURE(m.description());
        double prev_mu = 0.0, prev_tail = 0.0;
        for (double d : grid) {
            // μ non-decreasing as δ decreases, tail non-increasing in x
            const double mval = mu(m, d);
            CHECK(mval >= prev_mu);
            prev_mu = mval;
            const double tv = tail(m, d);
            CHECK(tv >= prev_tail);
            prev_tail = tv;

            // I = H + δΠ̄(δ)
            const double I = integrated_tail(m, d);
            CHECK(std::abs(I - (truncated_moment(m, d, 1) + d * tail(m, d))) <= 1e-9 * I);

            // Shortened moments
            const ShortenedModel sh{m, d};
            CHECK(sh.moment(1) == doctest::Approx(I).epsilon(1e-9));

            for (double u : {1e-3, 1.0, 1.0 / d, 100.0 / d}) {
                // Φ̃^δ(u) from the measure against the closed/default route
                const double a = shortened_exponent(m, d, u);
                const double b = numeric::shortened_exponent(m, d, u);
                CHECK(a == doctest::Approx(b).epsilon(1e-9));
                CHECK(a <= laplace_exponent(m, u) * (1 + 1e-12));
            }
        }
        // Φ concave and non-decreasing on a log grid
        double prev = 0.0, prev_slope = INFINITY, prev_l = 0.0;
        for (double l = 1e-3; l <= 1e3; l *= 2) {
            const double p = laplace_exponent(m, l);
            CHECK(p >= prev);
            const double slope = (p - prev) / (l - prev_l);
            CHECK(slope <= prev_slope * (1 + 1e-9));
            prev_slope = slope;
            prev = p;
            prev_l = l;
        }
    }
}

TEST_CASE("closed forms agree with the quadrature route") {
    for (double alpha : {0.2, 0.5, 0.8}) {
        const auto m = LevyModel::stable(alpha);
        for (double l = 1e-3; l <= 1e3; l *= 10) {
            CHECK(numeric::laplace_exponent(m, l) == doctest::Approx(std::pow(l, alpha)).epsilon(1e-9));
        }
        for (double d : {1e-1, 1e-3, 1e-5}) {
            CHECK(numeric::integrated_tail(m, d) == doctest::Approx(integrated_tail(m, d)).epsilon(1e-9));
            for (int k = 1; k <= 3; ++k) {
                CHECK(numeric::truncated_moment(m, d, k) == doctest::Approx(truncated_moment(m, d, k)).epsilon(1e-9));
            }
        }
    }
    const auto ga = LevyModel::gamma(2.0, 0.7);
    for (double l : {1e-2, 1.0, 1e2}) {
        CHECK(numeric::laplace_exponent(ga, l) == doctest::Approx(laplace_exponent(ga, l)).epsilon(1e-9));
    }
}

TEST_CASE("renewal bracket constant for stable") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        const auto m = LevyModel::stable(alpha);
        for (double d : {1e-2, 1e-3, 1e-4, 1e-6}) {
            const double U = *closed_form_renewal(m, d);
            CHECK(U * laplace_exponent(m, 1.0 / d) == doctest::Approx(1.0 / gamma_fn(1 + alpha)).epsilon(1e-9));
        }
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS(LevyModel::stable(1.0));
    CHECK_THROWS(LevyModel::stable(0.0));
    CHECK_THROWS(LevyModel::stable(0.5, -1.0));
    CHECK_THROWS(LevyModel::gamma(0.0, 1.0));
    CHECK_THROWS(LevyModel::truncated_stable(0.5, 0.0));
    // Non-integrable custom tail: ∫₀ Π̄ diverges
    const auto bad = LevyModel::custom("bad", [](double x) { return 1.0 / x; });
    CHECK_THROWS_AS(integrated_tail(bad, 0.1), ModelInvalidError);
}
