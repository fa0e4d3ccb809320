#include "hetq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hetq {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

RateFunction parse_rate(const json& j, const std::string& where) {
    if (j.is_number()) {
        return RateFunction::constant(j.get<double>());
    }
    if (!j.is_object()) {
        throw ConfigError(where + " must be a number or an object");
    }
    reject_unknown(j, {"constant", "harmonics", "table"}, where);
    if (j.contains("table")) {
        if (j.contains("constant") || j.contains("harmonics")) {
            throw ConfigError(where + ": 'table' cannot be combined with 'constant' or 'harmonics'");
        }
        std::vector<Breakpoint> rows;
        for (const auto& row : j.at("table")) {
            if (row.is_array() && row.size() == 2) {
                rows.push_back({row[0].get<double>(), row[1].get<double>()});
            } else if (row.is_object()) {
                reject_unknown(row, {"start", "value"}, where + ".table");
                rows.push_back({row.at("start").get<double>(), row.at("value").get<double>()});
            } else {
                throw ConfigError(where + ".table rows must be [start, value] or {start, value}");
            }
        }
        return RateFunction::table(std::move(rows));
    }
    const double c = j.value("constant", 0.0);
    std::vector<Harmonic> hs;
    if (j.contains("harmonics")) {
        for (const auto& h : j.at("harmonics")) {
            reject_unknown(h, {"amplitude", "kind", "harmonic"}, where + ".harmonics");
            Harmonic term;
            term.amplitude = h.at("amplitude").get<double>();
            const auto kind = h.value("kind", std::string("sin"));
            if (kind == "sin") {
                term.kind = Wave::Sin;
            } else if (kind == "cos") {
                term.kind = Wave::Cos;
            } else {
                throw ConfigError(where + ": harmonic kind must be 'sin' or 'cos', got '" + kind + "'");
            }
            term.harmonic = h.value("harmonic", 1);
            hs.push_back(term);
        }
    }
    return RateFunction::trigonometric(c, std::move(hs));
}

ConfigSettings parse_settings(const json& j) {
    reject_unknown(j, {"n", "step", "horizon", "tol_mix", "tol_trunc", "paths", "seed", "epsilon", "delta1"},
                   "settings");
    ConfigSettings s;
    if (j.contains("n")) s.n = j["n"].get<std::size_t>();
    if (j.contains("step")) s.step = j["step"].get<double>();
    if (j.contains("horizon")) s.horizon = j["horizon"].get<double>();
    if (j.contains("tol_mix")) s.tol_mix = j["tol_mix"].get<double>();
    if (j.contains("tol_trunc")) s.tol_trunc = j["tol_trunc"].get<double>();
    if (j.contains("paths")) s.paths = j["paths"].get<std::size_t>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("epsilon")) s.epsilon = j["epsilon"].get<double>();
    if (j.contains("delta1")) s.delta1 = j["delta1"].get<double>();
    return s;
}

}  // namespace

ModelConfig parse_model_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed model config: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("model config must be a JSON object");
    }
    reject_unknown(root, {"name", "description", "lambda", "mu1", "mu2", "settings"}, "model config");
    for (const char* key : {"lambda", "mu1", "mu2"}) {
        if (!root.contains(key)) {
            throw ConfigError(std::string("model config is missing '") + key + "'");
        }
    }
    try {
        auto lambda = parse_rate(root["lambda"], "lambda");
        auto mu1 = parse_rate(root["mu1"], "mu1");
        auto mu2 = parse_rate(root["mu2"], "mu2");
        ModelSpec spec(std::move(lambda), std::move(mu1), std::move(mu2), root.value("name", std::string{}));
        ConfigSettings settings;
        if (root.contains("settings")) {
            settings = parse_settings(root["settings"]);
        }
        return {std::move(spec), settings};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid model config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
}

ModelConfig load_model_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open model config '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_config(ss.str());
}

}  // namespace hetq
