#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "lgwalk/measurement.hpp"

namespace lgwalk {

/// Full experiment description; mirrors the flat JSON config file one to one.
struct ProtocolConfig {
    int steps = 4;
    double theta = 1.5707963267948966; // pi/2, the fair coin
    int t2_step = 1;
    std::string q2_scheme = "constant"; // "constant" or "dichotomic:<xi>"
    int removal_shift = 5;
    double dephasing = 0;
    double detection_error = 0;
    double prep_error = 0;
    double excitation_prob = 0;
    std::int64_t shots_per_arm = 404;
    std::uint64_t seed = 1;
    double step_duration_us = 26.0;
    bool literal_right_arm = false; // right-arm realization variant

    void validate() const;

    QScheme scheme() const;
    WalkSpec walk_spec() const;
    RemovalProtocol protocol(Arm arm) const;
    NoiseParams noise() const;
    double total_duration_s() const { return steps * step_duration_us * 1e-6; }
};

/// Parses a (possibly partial) config object; missing fields keep their
/// defaults, unknown fields are rejected.
ProtocolConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ProtocolConfig& config);

ProtocolConfig load_config_file(const std::filesystem::path& path);

QScheme parse_q2_scheme(const std::string& text);
std::string format_q2_scheme(const QScheme& scheme);

} // namespace lgwalk
