#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sessions/checker.hpp"
#include "sessions/oracle.hpp"
#include "sessions/process.hpp"

namespace sessions {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.1.0";

// FNV-1a 64-bit digest of the input file, as 16 hex digits.
std::string input_digest(std::string_view text);

Json to_json(const Value& value);
Json to_json(const SessionAction& action);
Json to_json(const Trace& trace);
Json to_json(const Violation& violation);

// Inverse of to_json; throws InvalidArgument on malformed input.
Value value_from_json(const Json& json);
Trace trace_from_json(const Json& json);

// {version, command, input_digest, verdict, findings: []}
Json report_skeleton(std::string_view command, std::string_view digest, std::string_view verdict);

Json safety_report_json(const SafetyReport& report, std::string_view digest);
Json session_report_json(const SessionReport& report, std::string_view digest);

}  // namespace sessions
