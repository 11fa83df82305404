#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "boxdim/errors.hpp"
#include "boxdim/levy_model.hpp"
#include "boxdim/path_engine.hpp"
#include "boxdim/stats.hpp"

using namespace boxdim;

namespace {
JumpSkeleton single_jump() {
    JumpSkeleton s;
    s.horizon = 1.0;
    s.cutoff = 1e-6;
    s.effective_drift = 0.0;
    s.events = {{0.5, 5.0}};
    return s;
}
SimConfig cfg_with(double eps, std::uint64_t seed, std::uint64_t replica = 0, double t = 1.0) {
    SimConfig c;
    c.horizon = t;
    c.cutoff = eps;
    c.seed = seed;
    c.replica = replica;
    return c;
}
}  // namespace

TEST_CASE("deterministic skeletons") {
    const auto sk = sample_skeleton(LevyModel::drift_only(1.0), cfg_with(1e-6, 1));
    CHECK(sk.events.empty());
    CHECK(sk.effective_drift == 1.0);
    CHECK(value_at(sk, 0.3) == doctest::Approx(0.3).epsilon(1e-15));

    const auto one = single_jump();
    CHECK(value_at(one, 1.0) == 5.0);
    CHECK(value_at(one, 1.0, PathMode::shortened, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(value_at(one, 1.0, PathMode::truncated, 0.1) == 0.0);
    CHECK(value_at(one, 0.49) == 0.0);
    CHECK(*first_passage_time(one, 0.1) == 0.5);
    CHECK_FALSE(first_passage_time(one, 5.0).has_value());
    CHECK_THROWS_AS(value_at(one, 1.0, PathMode::shortened, 1e-7), PrecisionError);
}

TEST_CASE("skeleton structure and determinism") {
    const auto m = LevyModel::stable(0.5);
    const auto a = sample_skeleton(m, cfg_with(1e-6, 42));
    const auto b = sample_skeleton(m, cfg_with(1e-6, 42));
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].size == b.events[i].size);
    }
    CHECK(a.poisson_count == a.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].size >= 1e-6);
        CHECK(a.events[i].time > 0.0);
        CHECK(a.events[i].time <= 1.0);
        if (i > 0) CHECK(a.events[i].time > a.events[i - 1].time);
    }
    // effective drift = d + ∫₀^ε xΠ(dx)
    CHECK(a.effective_drift == doctest::Approx(truncated_moment(m, 1e-6, 1)).epsilon(1e-12));
    const auto other = sample_skeleton(m, cfg_with(1e-6, 42, 1));
    CHECK(other.events.front().time != a.events.front().time);
}

TEST_CASE("auto cutoff needs a declared resolution") {
    SimConfig c;
    c.horizon = 1.0;
    CHECK_THROWS_AS(sample_skeleton(LevyModel::stable(0.5), c), ConfigError);
    c.delta_min = 1e-3;
    const auto sk = sample_skeleton(LevyModel::stable(0.5), c);
    CHECK(sk.cutoff <= 1e-5);
    // neglected variance rule
    const auto m = LevyModel::stable(0.5);
    const double eps = resolve_cutoff(m, 1e-3);
    const double dv = 1e-3 * v(m, 1e-3);
    CHECK(truncated_moment(m, eps, 2) <= 1e-4 * dv * dv * (1 + 1e-9));
    c.cutoff_scale = 0.5;
    CHECK(effective_cutoff(m, c) == doctest::Approx(0.5 * eps).epsilon(1e-15));
}

TEST_CASE("Poisson event count matches t times the tail at the cutoff") {
    const auto m = LevyModel::stable(0.5);
    const int n = 10000;
    std::vector<double> counts(n);
    for (int i = 0; i < n; ++i) counts[i] = double(sample_skeleton(m, cfg_with(1e-6, 5, i)).poisson_count);
    const auto s = summarize(counts);
    const double expected = 564.18958354775629;
    CHECK(std::abs(s.mean - expected) <= 3.0 * std::sqrt(expected / n));
}

TEST_CASE("shortened and raw means") {
    const int n = 10000;
    {
        // Gamma(1,1): E X_1 = 1 (cutoff drift included)
        const auto m = LevyModel::gamma(1, 1);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = value_at(sample_skeleton(m, cfg_with(1e-6, 11, i)), 1.0);
        const auto s = summarize(x);
        CHECK(std::abs(s.mean - 1.0) <= 4 * s.se_mean);
    }
    {
        // Stable(0.5): E X̃_1^δ = δ μ(δ)
        const auto m = LevyModel::stable(0.5);
        const double d = 0.01;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = value_at(sample_skeleton(m, cfg_with(1e-6, 12, i)), 1.0, PathMode::shortened, d);
        const auto s = summarize(x);
        CHECK(std::abs(s.mean - d * mu(m, d)) <= 4 * s.se_mean);
    }
}

TEST_CASE("path identities on random skeletons") {
    const auto m = LevyModel::stable(0.5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto sk = sample_skeleton(m, cfg_with(1e-6, 77, rep));
        for (double s : {0.0, 0.1, 0.37, 0.8, 1.0}) {
            const double d = 0.01;
            double excess = 0.0;
            for (const auto& e : sk.events) {
                if (e.time <= s) excess += std::max(e.size - d, 0.0);
            }
            const double raw = value_at(sk, s);
            const double sh = value_at(sk, s, PathMode::shortened, d);
            CHECK(raw - sh == doctest::Approx(excess).epsilon(1e-12));
            // monotone coupling in δ
            const double sh_small = value_at(sk, s, PathMode::shortened, 1e-3);
            CHECK(sh_small <= sh);
            if (s > 0) CHECK(sh_small / 1e-3 >= sh / d * (1 - 1e-12));
        }
        double prev = 0.0;
        for (int k = 0; k <= 100; ++k) {
            const double x = value_at(sk, k / 100.0, PathMode::shortened, 1e-3);
            CHECK(x >= prev);
            prev = x;
        }
    }
}

TEST_CASE("skeleton CSV round trip") {
    const auto sk = sample_skeleton(LevyModel::gamma(1, 1), cfg_with(1e-4, 3, 2, 2.0));
    std::filesystem::create_directories(BOXDIM_TEST_TMP);
    const auto path = std::filesystem::path(BOXDIM_TEST_TMP) / "skel.csv";
    write_skeleton_csv(sk, path);
    const auto back = read_skeleton_csv(path);
    CHECK(back.horizon == sk.horizon);
    CHECK(back.cutoff == sk.cutoff);
    CHECK(back.effective_drift == sk.effective_drift);
    CHECK(back.provenance.seed == 3);
    CHECK(back.provenance.replica == 2);
    REQUIRE(back.events.size() == sk.events.size());
    for (std::size_t i = 0; i < sk.events.size(); ++i) {
        CHECK(back.events[i].time == sk.events[i].time);
        CHECK(back.events[i].size == sk.events[i].size);
    }
}
