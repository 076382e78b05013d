#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "lgwalk/analysis.hpp"
#include "lgwalk/config.hpp"
#include "lgwalk/stats.hpp"

namespace lgwalk {

std::string arm_name(Arm arm);
Arm arm_from_name(const std::string& name);
std::string branch_name(Branch b);
Branch branch_from_name(const std::string& name);

nlohmann::ordered_json event_to_json(const EventRecord& ev);
EventRecord event_from_json(const nlohmann::json& j);

/// JSONL event log: the first line carries the full ProtocolConfig (and thus
/// the seed), each following line one EventRecord.
void write_event_log(std::ostream& out, const ProtocolConfig& config,
                     std::span<const EventRecord> events);
void write_event_log_file(const std::filesystem::path& path, const ProtocolConfig& config,
                          std::span<const EventRecord> events);

struct EventLog {
    ProtocolConfig config;
    std::vector<EventRecord> events;
};

/// Parses a JSONL log; parse failures name the source and 1-based line.
EventLog read_event_log(std::istream& in, const std::string& source_name);
EventLog read_event_log_file(const std::filesystem::path& path);

nlohmann::ordered_json report_to_json(const CorrelationReport& report);
nlohmann::ordered_json interval_to_json(const IntervalEstimate& estimate);

std::string uncertainty_method_name(UncertaintyMethod m);
std::string interval_method_name(IntervalMethod m);

} // namespace lgwalk
