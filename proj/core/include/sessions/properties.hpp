#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sessions/process.hpp"
#include "sessions/security.hpp"
#include "sessions/types.hpp"

namespace sessions {

enum class PropertyVerdict { Pass, VacuousPass, Fail };

std::string_view to_string(PropertyVerdict verdict);  // "PASS", "PASS (vacuous)", "FAIL"

struct PropertyReport {
  std::string property;
  PropertyVerdict verdict = PropertyVerdict::Pass;
  std::string detail;
  std::optional<Trace> witness;   // the trace leading to the failure
  std::size_t states_explored = 0;
  // Global types visited along the witness (subject reduction) or the
  // residual chain of the longest explored run when passing.
  std::vector<GlobalType> chain;

  bool passed() const { return verdict != PropertyVerdict::Fail; }
};

// Typable sessions are safe: if check_session accepts, the oracle finds no
// violation up to `depth`. Untypable sessions pass vacuously.
PropertyReport soundness_property(const Session& session, const GlobalType& global,
                                  const SecurityContext& security, std::size_t depth);

// Typing is preserved by reduction: from every state reachable in at most
// `steps` transitions, a message p → q : λ is matched by G ∖ p λ q and a τ by
// G itself, and the resulting pair type checks. The new types of the
// participants that moved are reachable from their old ones by ⇒*.
// Untypable starting points pass vacuously.
PropertyReport subject_reduction_property(const Session& session, const GlobalType& global,
                                          const SecurityContext& security, std::size_t steps);

}  // namespace sessions
