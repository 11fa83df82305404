#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "boxdim/errors.hpp"
#include "boxdim/model_io.hpp"

using namespace boxdim;
using nlohmann::json;

TEST_CASE("model files round trip") {
    for (const auto& j : {json{{"family", "stable"}, {"alpha", 0.5}, {"drift", 0.0}},
                          json{{"family", "gamma"}, {"rate", 2.0}, {"shape", 0.5}, {"drift", 0.25}},
                          json{{"family", "truncated_stable"}, {"alpha", 0.7}, {"cut", 0.1}, {"drift", 0.0}},
                          json{{"family", "custom"}, {"tail", "log_inverse"}, {"drift", 0.0}},
                          json{{"family", "drift"}, {"drift", 1.0}}}) {
        CAPTURE(j.dump());
        const auto m = model_from_json(j);
        CHECK(model_to_json(m) == j);
    }
    const auto m = model_from_json(json{{"family", "stable"}, {"alpha", 0.3}});
    CHECK(m.drift() == 0.0);
    CHECK(*m.stable_index() == 0.3);
}

TEST_CASE("model file errors") {
    CHECK_THROWS_AS(model_from_json(json{{"family", "stable"}, {"alpha", 0.5}, {"beta", 1}}), ConfigError);
    CHECK_THROWS_AS(model_from_json(json{{"family", "stable"}}), ConfigError);
    CHECK_THROWS_AS(model_from_json(json{{"family", "stable"}, {"alpha", 1.5}}), ConfigError);
    CHECK_THROWS_AS(model_from_json(json{{"family", "weibull"}}), ConfigError);
    CHECK_THROWS_AS(model_from_json(json{{"family", "custom"}, {"tail", "x**-0.5"}}), ConfigError);
    CHECK_THROWS_AS(model_from_json(json::array()), ConfigError);

    const std::filesystem::path missing = std::filesystem::path(BOXDIM_TEST_TMP) / "does_not_exist.json";
    try {
        load_model_file(missing);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("does_not_exist.json") != std::string::npos);
    }

    std::filesystem::create_directories(BOXDIM_TEST_TMP);
    const auto broken = std::filesystem::path(BOXDIM_TEST_TMP) / "broken.json";
    std::ofstream(broken) << "{ \"family\": ";
    CHECK_THROWS_AS(load_model_file(broken), ConfigError);
}
