#include "sessions/report.hpp"

#include <cstdint>
#include <cstdio>

#include "overloaded.hpp"
#include "sessions/error.hpp"
#include "sessions/syntax.hpp"

namespace sessions {

using detail::overloaded;

std::string input_digest(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Json to_json(const Value& value) {
  Json j;
  j["sort"] = std::string(to_string(value.sort()));
  std::visit([&](const auto& payload) { j["payload"] = payload; }, value.payload);
  j["level"] = value.level;
  j["topic"] = value.topic;
  return j;
}

Json to_json(const SessionAction& action) {
  Json j;
  if (const auto* m = as_message(action)) {
    j["kind"] = "message";
    j["from"] = m->from;
    j["to"] = m->to;
    j["label"] = m->label;
    j["value"] = to_json(m->value);
  } else {
    j["kind"] = "tau";
  }
  return j;
}

Json to_json(const Trace& trace) {
  Json j = Json::array();
  for (const auto& action : trace) j.push_back(to_json(action));
  return j;
}

Json to_json(const Violation& violation) {
  Json j;
  j["kind"] = std::string(to_string(violation.kind));
  j["indices"] = violation.indices;
  j["trace"] = to_json(violation.trace);
  j["detail"] = violation.explanation;
  return j;
}

Value value_from_json(const Json& json) {
  try {
    auto sort = sort_from_name(json.at("sort").get<std::string>());
    if (!sort) throw Error(ErrorKind::InvalidArgument, "unknown sort in value");
    const Json& p = json.at("payload");
    Payload payload;
    switch (*sort) {
      case Sort::Nat: payload = p.get<std::uint64_t>(); break;
      case Sort::Int: payload = p.get<std::int64_t>(); break;
      case Sort::Bool: payload = p.get<bool>(); break;
      case Sort::Str: payload = p.get<std::string>(); break;
    }
    return Value{std::move(payload), json.at("level").get<std::string>(),
                 json.at("topic").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed value: ") + e.what());
  }
}

Trace trace_from_json(const Json& json) {
  if (!json.is_array()) throw Error(ErrorKind::InvalidArgument, "trace must be an array");
  Trace trace;
  try {
    for (const auto& entry : json) {
      const auto kind = entry.at("kind").get<std::string>();
      if (kind == "tau") {
        trace.emplace_back(Tau{});
      } else if (kind == "message") {
        trace.emplace_back(Message{entry.at("from").get<std::string>(),
                                   entry.at("to").get<std::string>(),
                                   entry.at("label").get<std::string>(),
                                   value_from_json(entry.at("value"))});
      } else {
        throw Error(ErrorKind::InvalidArgument, "unknown action kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed trace: ") + e.what());
  }
  return trace;
}

Json report_skeleton(std::string_view command, std::string_view digest, std::string_view verdict) {
  Json j;
  j["version"] = std::string(kVersion);
  j["command"] = std::string(command);
  j["input_digest"] = std::string(digest);
  j["verdict"] = std::string(verdict);
  j["findings"] = Json::array();
  return j;
}

Json safety_report_json(const SafetyReport& report, std::string_view digest) {
  Json j = report_skeleton("oracle", digest, report.safe ? "safe" : "unsafe");
  for (const auto& v : report.violations) j["findings"].push_back(to_json(v));
  j["depth"] = report.depth;
  j["traces_explored"] = report.traces_explored;
  return j;
}

Json session_report_json(const SessionReport& report, std::string_view digest) {
  Json j = report_skeleton("check", digest, report.ok ? "ok" : "rejected");
  if (report.error) {
    Json f;
    f["kind"] = std::string(to_string(*report.error));
    f["indices"] = Json::array();
    f["trace"] = Json::array();
    f["detail"] = report.detail;
    j["findings"].push_back(std::move(f));
  }
  Json participants = Json::array();
  for (const auto& p : report.participants) {
    Json e;
    e["participant"] = p.participant;
    e["ok"] = p.ok;
    e["projection"] = p.projection ? Json(to_string(*p.projection)) : Json(nullptr);
    e["type"] = p.type ? Json(to_string(*p.type)) : Json(nullptr);
    Json writes = Json::object();
    for (const auto& [topic, level] : p.writes) writes[topic] = level;
    e["writes"] = std::move(writes);
    if (p.error) {
      e["error"] = std::string(to_string(*p.error));
      e["detail"] = p.detail;
    }
    participants.push_back(std::move(e));
  }
  j["participants"] = std::move(participants);
  return j;
}

}  // namespace sessions
