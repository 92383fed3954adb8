#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sessions/security.hpp"
#include "sessions/types.hpp"

namespace sessions {

// Bookkeeping for the coinductive procedures: how many assumptions were
// recorded, and the finite bound the visited set can never exceed.
struct CoinductionStats {
  std::size_t visited = 0;
  std::size_t bound = 0;
};

// Number of distinct nodes in the unfolding closure of a closed type.
std::size_t closure_size(const SessionType& type);

// T1 ≤ T2 as the greatest fixpoint of sub-end, sub-in and sub-out. Inputs
// may carry extra branches on the left, outputs extra branches on the
// right; shared labels need identical annotated sorts.
bool subtype(const SessionType& sub, const SessionType& super,
             CoinductionStats* stats = nullptr);

// Equality of the unfolding trees (up to branch order).
bool equivalent(const SessionType& a, const SessionType& b);

// ⟨ℓ,φ⟩ ≺ T: every reachable output carries a level above ℓ or a topic
// independent of φ.
bool agrees(const Level& level, const Topic& topic, const SessionType& type,
            const Lattice& lattice, const TopicUniverse& topics,
            CoinductionStats* stats = nullptr);

// Safe session types: outputs respect the receiver's reading level, inputs
// are followed by continuations that agree with the received value.
bool safe_type(const SessionType& type, const SecurityContext& security,
               CoinductionStats* stats = nullptr);

// Why safe_type fails: the first violated premise, or nullopt when safe.
std::optional<std::string> unsafe_reason(const SessionType& type, const SecurityContext& security);

// One-step reducts T ⇒ T′: a proper sub-union of an output choice, the
// continuation of a single output, or any input continuation. μ is unfolded
// first; end has none.
std::vector<SessionType> reduce_type(const SessionType& type);

// Reflexive-transitive closure of reduce_type, deduplicated structurally.
// Stops after `limit` types.
std::vector<SessionType> reduce_type_closure(const SessionType& type, std::size_t limit = 4096);

}  // namespace sessions
