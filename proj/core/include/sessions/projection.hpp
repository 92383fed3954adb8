#pragma once

#include <compare>
#include <set>
#include <vector>

#include "sessions/types.hpp"

namespace sessions {

// PART(G): every participant of every communication, over all branches.
std::set<Participant> participants(const GlobalType& global);

// G ↾ r. μt.G projects to μt.(G ↾ r) when r takes part in some unfolding of
// G, otherwise to end. Participants outside a communication must project
// every branch to the same type up to α-renaming and label order. Throws
// NotProjectable.
SessionType project(const GlobalType& global, const Participant& participant);

// G ∖ p λ q: the global type left once p sends λ to q. Communications
// between pairs disjoint from {p, q} are kept in front; μ is unfolded.
// Throws ResidualUndefined.
GlobalType residual(const GlobalType& global, const Participant& from, const Label& label,
                    const Participant& to);

struct GlobalReduction {
  Participant from;
  Label label;
  Participant to;
  GlobalType residual;
  auto operator<=>(const GlobalReduction&) const = default;
  bool operator==(const GlobalReduction&) const = default;
};

// G ⇒ G ∖ p λ q for every communication p —λ→ q in G with a defined
// residual. Sorted.
std::vector<GlobalReduction> reduce_global(const GlobalType& global);

}  // namespace sessions
