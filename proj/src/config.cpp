#include "lgwalk/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace lgwalk {

QScheme parse_q2_scheme(const std::string& text) {
    if (text == "constant" || text == "constant_one")
        return QScheme::constant_one();
    const std::string prefix = "dichotomic:";
    if (text.rfind(prefix, 0) == 0) {
        std::string tail = text.substr(prefix.size());
        std::size_t used = 0;
        double xi = 0;
        try {
            xi = std::stod(tail, &used);
        } catch (const std::exception&) {
            throw ValidationError("q2_scheme: cannot parse xi in '" + text + "'");
        }
        if (used != tail.size())
            throw ValidationError("q2_scheme: trailing characters in '" + text + "'");
        return QScheme::dichotomic(xi);
    }
    throw ValidationError("q2_scheme: expected 'constant' or 'dichotomic:<xi>', got '" + text + "'");
}

std::string format_q2_scheme(const QScheme& scheme) {
    if (scheme.kind == QScheme::Kind::constant_one)
        return "constant";
    std::ostringstream os;
    os << "dichotomic:" << scheme.xi;
    return os.str();
}

void ProtocolConfig::validate() const {
    if (steps < 1)
        throw ValidationError("config: steps must be >= 1");
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw ValidationError("config: theta must lie in [0, pi]");
    if (t2_step < 1 || t2_step >= steps)
        throw ValidationError("config: t2_step must satisfy 0 < t2_step < steps");
    parse_q2_scheme(q2_scheme);
    if (removal_shift <= 0 || removal_shift % 2 == 0)
        throw ValidationError("config: removal_shift must be a positive odd integer");
    for (auto [value, name] : {std::pair{dephasing, "dephasing"},
                               {detection_error, "detection_error"},
                               {prep_error, "prep_error"},
                               {excitation_prob, "excitation_prob"}}) {
        if (!(value >= 0.0 && value <= 1.0))
            throw ValidationError(std::string("config: ") + name + " must lie in [0, 1]");
    }
    if (shots_per_arm < 1)
        throw ValidationError("config: shots_per_arm must be >= 1");
    if (!(step_duration_us > 0))
        throw ValidationError("config: step_duration_us must be positive");
}

QScheme ProtocolConfig::scheme() const { return parse_q2_scheme(q2_scheme); }

WalkSpec ProtocolConfig::walk_spec() const { return WalkSpec{steps, CoinParams(theta), dephasing}; }

RemovalProtocol ProtocolConfig::protocol(Arm arm) const {
    RemovalProtocol p;
    p.arm = arm;
    p.removal_shift = removal_shift;
    p.excitation_prob = excitation_prob;
    p.literal_text_arm = literal_right_arm;
    return p;
}

NoiseParams ProtocolConfig::noise() const { return NoiseParams{detection_error, prep_error}; }

ProtocolConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ValidationError("config: expected a JSON object");
    static const std::set<std::string> known = {
        "steps",          "theta",          "t2_step",        "q2_scheme",
        "removal_shift",  "dephasing",      "detection_error", "prep_error",
        "excitation_prob", "shots_per_arm", "seed",           "step_duration_us",
        "literal_right_arm"};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            throw ValidationError("config: unknown field '" + key + "'");

    ProtocolConfig c;
    auto get = [&](const char* key, auto& out) {
        if (j.contains(key)) {
            try {
                j.at(key).get_to(out);
            } catch (const nlohmann::json::exception& e) {
                throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
            }
        }
    };
    get("steps", c.steps);
    get("theta", c.theta);
    get("t2_step", c.t2_step);
    get("q2_scheme", c.q2_scheme);
    get("removal_shift", c.removal_shift);
    get("dephasing", c.dephasing);
    get("detection_error", c.detection_error);
    get("prep_error", c.prep_error);
    get("excitation_prob", c.excitation_prob);
    get("shots_per_arm", c.shots_per_arm);
    get("seed", c.seed);
    get("step_duration_us", c.step_duration_us);
    get("literal_right_arm", c.literal_right_arm);
    return c;
}

nlohmann::ordered_json config_to_json(const ProtocolConfig& c) {
    nlohmann::ordered_json j;
    j["steps"] = c.steps;
    j["theta"] = c.theta;
    j["t2_step"] = c.t2_step;
    j["q2_scheme"] = c.q2_scheme;
    j["removal_shift"] = c.removal_shift;
    j["dephasing"] = c.dephasing;
    j["detection_error"] = c.detection_error;
    j["prep_error"] = c.prep_error;
    j["excitation_prob"] = c.excitation_prob;
    j["shots_per_arm"] = c.shots_per_arm;
    j["seed"] = c.seed;
    j["step_duration_us"] = c.step_duration_us;
    j["literal_right_arm"] = c.literal_right_arm;
    return j;
}

ProtocolConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config file " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace lgwalk
