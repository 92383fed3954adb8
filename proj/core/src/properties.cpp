#include "sessions/properties.hpp"

#include <map>
#include <set>
#include <utility>

#include "sessions/checker.hpp"
#include "sessions/error.hpp"
#include "sessions/oracle.hpp"
#include "sessions/projection.hpp"
#include "sessions/semantics.hpp"
#include "sessions/syntax.hpp"
#include "sessions/type_relations.hpp"

namespace sessions {

std::string_view to_string(PropertyVerdict verdict) {
  switch (verdict) {
    case PropertyVerdict::Pass: return "PASS";
    case PropertyVerdict::VacuousPass: return "PASS (vacuous)";
    case PropertyVerdict::Fail: return "FAIL";
  }
  return "?";
}

PropertyReport soundness_property(const Session& session, const GlobalType& global,
                                  const SecurityContext& security, std::size_t depth) {
  PropertyReport report;
  report.property = "soundness";
  SessionReport typing = check_session(session, global, security);
  if (!typing.ok) {
    report.verdict = PropertyVerdict::VacuousPass;
    report.detail = "session is not typable: " + typing.detail;
    return report;
  }
  SafetyReport safety = check_safe_session(session, depth, security);
  report.states_explored = safety.traces_explored;
  if (safety.safe) {
    report.detail = "typable and safe up to depth " + std::to_string(depth);
    return report;
  }
  const auto& v = safety.violations.front();
  report.verdict = PropertyVerdict::Fail;
  report.witness = v.trace;
  report.detail = "typable session violates " + std::string(to_string(v.kind)) + ": " + v.explanation;
  return report;
}

namespace {

const ParticipantReport* entry_for(const SessionReport& report, const Participant& p) {
  for (const auto& e : report.participants) {
    if (e.participant == p) return &e;
  }
  return nullptr;
}

bool reachable_by_reduction(const SessionType& from, const SessionType& to) {
  for (const auto& t : reduce_type_closure(from)) {
    if (equivalent(t, to)) return true;
  }
  return false;
}

class SubjectReduction {
 public:
  SubjectReduction(const SecurityContext& security, PropertyReport& report)
      : security_(security), report_(report) {}

  // False once a failure has been recorded in the report.
  bool explore(const Session& n, const GlobalType& g, const SessionReport& typing,
               std::size_t steps, Trace& path, std::vector<GlobalType>& chain) {
    if (!seen_.emplace(normalize_session(n), g, steps).second) return true;
    ++report_.states_explored;
    if (chain.size() > report_.chain.size()) report_.chain = chain;
    if (steps == 0) return true;
    for (const auto& step : step_session(n, security_.lattice)) {
      path.push_back(step.action);
      std::optional<GlobalType> next_g;
      std::vector<Participant> movers;
      if (const auto* m = as_message(step.action)) {
        movers = {m->from, m->to};
        try {
          next_g = residual(g, m->from, m->label, m->to);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ResidualUndefined) throw;
          return fail(path, chain, "no residual of " + to_string(g) + " after " + to_string(step.action));
        }
      } else {
        next_g = g;
        for (std::size_t i = 0; i < n.components.size(); ++i) {
          if (!(n.components[i] == step.next.components[i])) movers.push_back(n.components[i].participant);
        }
      }
      SessionReport next_typing = check_session(step.next, *next_g, security_);
      if (!next_typing.ok) {
        chain.push_back(*next_g);
        bool r = fail(path, chain, "reduct does not type check: " + next_typing.detail);
        chain.pop_back();
        return r;
      }
      for (const auto& p : movers) {
        const auto* before = entry_for(typing, p);
        const auto* after = entry_for(next_typing, p);
        if (before == nullptr || after == nullptr || !before->type || !after->type) continue;
        if (!reachable_by_reduction(*before->type, *after->type)) {
          return fail(path, chain,
                      "type of " + p + " moved from " + to_string(*before->type) + " to " +
                          to_string(*after->type) + ", which is not a reduct");
        }
      }
      bool message = as_message(step.action) != nullptr;
      if (message) chain.push_back(*next_g);
      bool ok = explore(step.next, *next_g, next_typing, steps - 1, path, chain);
      if (message) chain.pop_back();
      path.pop_back();
      if (!ok) return false;
    }
    return true;
  }

 private:
  bool fail(const Trace& path, const std::vector<GlobalType>& chain, std::string detail) {
    report_.verdict = PropertyVerdict::Fail;
    report_.witness = path;
    report_.chain = chain;
    report_.detail = std::move(detail);
    return false;
  }

  const SecurityContext& security_;
  PropertyReport& report_;
  std::set<std::tuple<Session, GlobalType, std::size_t>> seen_;
};

}  // namespace

PropertyReport subject_reduction_property(const Session& session, const GlobalType& global,
                                          const SecurityContext& security, std::size_t steps) {
  PropertyReport report;
  report.property = "subject-reduction";
  SessionReport typing = check_session(session, global, security);
  if (!typing.ok) {
    report.verdict = PropertyVerdict::VacuousPass;
    report.detail = "session is not typable: " + typing.detail;
    return report;
  }
  Trace path;
  std::vector<GlobalType> chain{global};
  SubjectReduction search(security, report);
  if (search.explore(session, global, typing, steps, path, chain)) {
    report.detail = "typing preserved along every run of at most " + std::to_string(steps) +
                    " steps";
  }
  return report;
}

}  // namespace sessions
