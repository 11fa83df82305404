#include "boxdim/model_io.hpp"

#include <fstream>
#include <set>
#include <variant>

#include "boxdim/errors.hpp"

namespace boxdim {
namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("model: unknown key '" + key + "'");
    }
}

double number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("model: missing key '") + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(std::string("model: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

double drift_of(const nlohmann::json& j) { return j.contains("drift") ? number(j, "drift") : 0.0; }

}  // namespace

LevyModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model: expected a JSON object");
    if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("model: missing 'family'");
    const auto family = j.at("family").get<std::string>();
    try {
        if (family == "stable") {
            reject_unknown(j, {"family", "alpha", "drift"});
            return LevyModel::stable(number(j, "alpha"), drift_of(j));
        }
        if (family == "gamma") {
            reject_unknown(j, {"family", "rate", "shape", "drift"});
            const double rate = j.contains("rate") ? number(j, "rate") : 1.0;
            const double shape = j.contains("shape") ? number(j, "shape") : 1.0;
            return LevyModel::gamma(rate, shape, drift_of(j));
        }
        if (family == "truncated_stable") {
            reject_unknown(j, {"family", "alpha", "cut", "drift"});
            return LevyModel::truncated_stable(number(j, "alpha"), number(j, "cut"), drift_of(j));
        }
        if (family == "custom") {
            reject_unknown(j, {"family", "tail", "drift"});
            if (!j.contains("tail") || !j.at("tail").is_string()) {
                throw ConfigError("model: custom family needs a built-in 'tail' name");
            }
            return builtin_custom_model(j.at("tail").get<std::string>(), drift_of(j));
        }
        if (family == "drift") {
            reject_unknown(j, {"family", "drift"});
            return LevyModel::drift_only(number(j, "drift"));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    throw ConfigError("model: unknown family '" + family + "'");
}

LevyModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

nlohmann::json model_to_json(const LevyModel& model) {
    nlohmann::json j;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, StableFamily>) {
                j = {{"family", "stable"}, {"alpha", f.alpha}};
            } else if constexpr (std::is_same_v<T, GammaFamily>) {
                j = {{"family", "gamma"}, {"rate", f.rate}, {"shape", f.shape}};
            } else if constexpr (std::is_same_v<T, TruncatedStableFamily>) {
                j = {{"family", "truncated_stable"}, {"alpha", f.alpha}, {"cut", f.cut}};
            } else if constexpr (std::is_same_v<T, CustomFamily>) {
                j = {{"family", "custom"}, {"tail", f.name}};
            } else {
                j = {{"family", "drift"}};
            }
        },
        model.family());
    j["drift"] = model.drift();
    return j;
}

}  // namespace boxdim
