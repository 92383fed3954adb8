#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sessions/process.hpp"
#include "sessions/security.hpp"

namespace sessions {

enum class ViolationKind { AccessControl, LeakFreedom };

std::string_view to_string(ViolationKind kind);  // "AC" / "LF"

struct Violation {
  ViolationKind kind;
  Trace trace;
  // One message index for AC; the relay pair (i, j), i < j, for LF.
  std::vector<std::size_t> indices;
  std::string explanation;

  bool operator==(const Violation&) const = default;
};

// Pairs i < j where message i is received by the participant that sends
// message j. τ entries never take part.
std::vector<std::pair<std::size_t, std::size_t>> relay_pairs(const Trace& trace);

// One violation per message p → q : λ(v^{ℓ,φ}) with ℓ ⋢ ρ(q, φ).
std::vector<Violation> check_ac(const Trace& trace, const ReadingPolicy& policy,
                                const Lattice& lattice);

// One violation per relay pair whose levels drop (ℓ ⋢ ℓ′) on related topics.
std::vector<Violation> check_lf(const Trace& trace, const TopicUniverse& topics,
                                const Lattice& lattice);

struct SafetyReport {
  std::size_t depth = 0;
  std::size_t traces_explored = 0;
  bool safe = true;  // no violation up to `depth`
  // Ordered by (trace length, trace, indices); each witness is the shortest
  // trace exhibiting the violation, i.e. it ends at the offending message.
  std::vector<Violation> violations;
};

SafetyReport check_safe_session(const Session& session, std::size_t depth,
                                const SecurityContext& security);

}  // namespace sessions
