#include "lgwalk/event_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lgwalk {

std::string arm_name(Arm arm) {
    switch (arm) {
    case Arm::none: return "none";
    case Arm::condition_on_left: return "condition_on_left";
    default: return "condition_on_right";
    }
}

Arm arm_from_name(const std::string& name) {
    if (name == "none")
        return Arm::none;
    if (name == "condition_on_left")
        return Arm::condition_on_left;
    if (name == "condition_on_right")
        return Arm::condition_on_right;
    throw ValidationError("unknown arm: '" + name + "'");
}

std::string branch_name(Branch b) { return b == Branch::left ? "left" : "right"; }

Branch branch_from_name(const std::string& name) {
    if (name == "left")
        return Branch::left;
    if (name == "right")
        return Branch::right;
    throw ValidationError("unknown branch: '" + name + "'");
}

nlohmann::ordered_json event_to_json(const EventRecord& ev) {
    nlohmann::ordered_json j;
    j["run_id"] = ev.run_id;
    j["arm"] = arm_name(ev.arm);
    j["theta"] = ev.theta;
    j["reported_x3"] = ev.reported_x3;
    j["retained"] = ev.retained;
    j["q3"] = ev.q3;
    if (ev.branch_at_t2.has_value())
        j["branch_at_t2"] = branch_name(*ev.branch_at_t2);
    else
        j["branch_at_t2"] = nullptr;
    j["seed"] = ev.seed;
    j["prep_error"] = ev.prep_error;
    j["corrupt"] = ev.corrupt;
    return j;
}

EventRecord event_from_json(const nlohmann::json& j) {
    EventRecord ev;
    try {
        j.at("run_id").get_to(ev.run_id);
        ev.arm = arm_from_name(j.at("arm").get<std::string>());
        j.at("theta").get_to(ev.theta);
        j.at("reported_x3").get_to(ev.reported_x3);
        j.at("retained").get_to(ev.retained);
        j.at("q3").get_to(ev.q3);
        if (j.contains("branch_at_t2") && !j.at("branch_at_t2").is_null())
            ev.branch_at_t2 = branch_from_name(j.at("branch_at_t2").get<std::string>());
        j.at("seed").get_to(ev.seed);
        if (j.contains("prep_error"))
            j.at("prep_error").get_to(ev.prep_error);
        if (j.contains("corrupt"))
            j.at("corrupt").get_to(ev.corrupt);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("event record: ") + e.what());
    }
    return ev;
}

void write_event_log(std::ostream& out, const ProtocolConfig& config,
                     std::span<const EventRecord> events) {
    out << config_to_json(config).dump() << '\n';
    for (const EventRecord& ev : events)
        out << event_to_json(ev).dump() << '\n';
}

void write_event_log_file(const std::filesystem::path& path, const ProtocolConfig& config,
                          std::span<const EventRecord> events) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    write_event_log(out, config, events);
}

EventLog read_event_log(std::istream& in, const std::string& source_name) {
    EventLog log;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
        }
        try {
            if (!have_header) {
                log.config = config_from_json(j);
                have_header = true;
            } else {
                log.events.push_back(event_from_json(j));
            }
        } catch (const ValidationError& e) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header)
        throw ValidationError(source_name + ": missing config header line");
    return log;
}

EventLog read_event_log_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open event log: " + path.string());
    return read_event_log(in, path.string());
}

std::string uncertainty_method_name(UncertaintyMethod m) {
    switch (m) {
    case UncertaintyMethod::bootstrap: return "bootstrap";
    case UncertaintyMethod::monte_carlo: return "monte_carlo";
    default: return "exact";
    }
}

std::string interval_method_name(IntervalMethod m) {
    switch (m) {
    case IntervalMethod::clopper_pearson: return "clopper_pearson";
    case IntervalMethod::bootstrap_gaussian: return "bootstrap_gaussian";
    case IntervalMethod::bootstrap_percentile: return "bootstrap_percentile";
    default: return "monte_carlo";
    }
}

namespace {

nlohmann::ordered_json arm_estimate_to_json(const ArmEstimate& a) {
    nlohmann::ordered_json j;
    j["total"] = a.total;
    j["kept"] = a.kept;
    j["p_raw"] = a.p_raw;
    j["p"] = a.p;
    j["mean"] = a.mean;
    return j;
}

} // namespace

nlohmann::ordered_json report_to_json(const CorrelationReport& r) {
    nlohmann::ordered_json j;
    j["k12"] = r.k12;
    j["k13"] = r.k13;
    j["k23"] = r.k23;
    j["k"] = r.k;
    j["k_prime"] = r.k_prime;
    j["witness_w"] = r.witness_w;
    if (r.uncertainty.has_value()) {
        j["uncertainty"] = {{"sigma", r.uncertainty->sigma},
                            {"method", uncertainty_method_name(r.uncertainty->method)}};
    } else {
        j["uncertainty"] = nullptr;
    }
    j["venality_zeta"] = r.venality_zeta;
    j["adjusted_bound"] = r.adjusted_bound;

    nlohmann::ordered_json est;
    est["mode"] = r.estimation.mode;
    est["events_unconditioned"] = r.estimation.events_unconditioned;
    est["left"] = arm_estimate_to_json(r.estimation.left);
    est["right"] = arm_estimate_to_json(r.estimation.right);
    auto put_opt = [&est](const char* key, const std::optional<double>& v) {
        if (v.has_value())
            est[key] = *v;
    };
    put_opt("bootstrap_sigma", r.estimation.bootstrap_sigma);
    put_opt("bootstrap_percentile_lower", r.estimation.bootstrap_percentile_lower);
    put_opt("bootstrap_percentile_upper", r.estimation.bootstrap_percentile_upper);
    put_opt("monte_carlo_sigma", r.estimation.monte_carlo_sigma);
    put_opt("corrupt_fraction", r.estimation.corrupt_fraction);
    j["estimation"] = est;
    return j;
}

nlohmann::ordered_json interval_to_json(const IntervalEstimate& e) {
    nlohmann::ordered_json j;
    j["point"] = e.point;
    j["lower"] = e.lower;
    j["upper"] = e.upper;
    j["confidence"] = e.confidence;
    j["method"] = interval_method_name(e.method);
    return j;
}

} // namespace lgwalk
