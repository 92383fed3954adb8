#include "sessions/oracle.hpp"

#include <algorithm>

#include "sessions/semantics.hpp"

namespace sessions {

std::string_view to_string(ViolationKind kind) {
  return kind == ViolationKind::AccessControl ? "AC" : "LF";
}

std::vector<std::pair<std::size_t, std::size_t>> relay_pairs(const Trace& trace) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto* first = as_message(trace[i]);
    if (first == nullptr) continue;
    for (std::size_t j = i + 1; j < trace.size(); ++j) {
      const auto* second = as_message(trace[j]);
      if (second != nullptr && second->from == first->to) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

namespace {

std::optional<Violation> ac_at(const Trace& trace, std::size_t index, const ReadingPolicy& policy,
                               const Lattice& lattice) {
  const auto* m = as_message(trace[index]);
  if (m == nullptr) return std::nullopt;
  const auto& bound = policy.reading_level(m->to, m->value.topic);
  if (lattice.leq(m->value.level, bound)) return std::nullopt;
  return Violation{ViolationKind::AccessControl, trace, {index},
                   "level " + m->value.level + " not below reading level rho(" + m->to + ", " +
                       m->value.topic + ") = " + bound};
}

std::optional<Violation> lf_at(const Trace& trace, std::size_t i, std::size_t j,
                               const TopicUniverse& topics, const Lattice& lattice) {
  const auto& in = *as_message(trace[i]);
  const auto& out = *as_message(trace[j]);
  if (lattice.leq(in.value.level, out.value.level)) return std::nullopt;
  if (topics.independent(in.value.topic, out.value.topic)) return std::nullopt;
  return Violation{ViolationKind::LeakFreedom, trace, {i, j},
                   "mediator " + in.to + " receives level " + in.value.level + " on topic " +
                       in.value.topic + " then sends level " + out.value.level +
                       " on related topic " + out.value.topic};
}

}  // namespace

std::vector<Violation> check_ac(const Trace& trace, const ReadingPolicy& policy,
                                const Lattice& lattice) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (auto v = ac_at(trace, i, policy, lattice)) out.push_back(std::move(*v));
  }
  return out;
}

std::vector<Violation> check_lf(const Trace& trace, const TopicUniverse& topics,
                                const Lattice& lattice) {
  std::vector<Violation> out;
  for (auto [i, j] : relay_pairs(trace)) {
    if (auto v = lf_at(trace, i, j, topics, lattice)) out.push_back(std::move(*v));
  }
  return out;
}

SafetyReport check_safe_session(const Session& session, std::size_t depth,
                                const SecurityContext& security) {
  validate_session(session);
  SafetyReport report;
  report.depth = depth;
  auto all = traces(session, depth, security.lattice);
  report.traces_explored = all.size();

  // Traces are prefix closed, so a violation surfaces first in the trace
  // ending at its last message; only those endings are judged.
  for (const auto& trace : all) {
    if (trace.empty() || as_message(trace.back()) == nullptr) continue;
    const std::size_t last = trace.size() - 1;
    if (auto v = ac_at(trace, last, security.policy, security.lattice)) {
      report.violations.push_back(std::move(*v));
    }
    const auto& receiver_side = as_message(trace.back())->from;
    for (std::size_t i = 0; i < last; ++i) {
      const auto* m = as_message(trace[i]);
      if (m == nullptr || m->to != receiver_side) continue;
      if (auto v = lf_at(trace, i, last, security.topics, security.lattice)) {
        report.violations.push_back(std::move(*v));
      }
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.trace != b.trace) return ShortlexLess{}(a.trace, b.trace);
                     return a.indices < b.indices;
                   });
  report.safe = report.violations.empty();
  return report;
}

}  // namespace sessions
