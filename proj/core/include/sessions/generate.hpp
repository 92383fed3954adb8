#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "sessions/process.hpp"
#include "sessions/security.hpp"
#include "sessions/types.hpp"

namespace sessions {

using Rng = std::mt19937_64;

struct GeneratorOptions {
  std::size_t min_participants = 2;
  std::size_t max_participants = 5;
  std::size_t max_depth = 5;     // communications along any path
  std::size_t max_branches = 2;  // labels per communication
  double recursion = 0.3;        // chance of one μ in a global type
};

// A 2-chain, 3-chain or diamond lattice, two or three topics with random
// independence, and reading levels biased towards ⊤.
SecurityContext random_security(Rng& rng, const std::vector<Participant>& participants);

// A closed, guarded global type over `participants` whose communications
// carry levels that keep each participant's projection likely safe.
// Branching communications either share one continuation or continue with
// the same pair only, so most results are projectable.
GlobalType random_global(Rng& rng, const SecurityContext& security,
                         const std::vector<Participant>& participants,
                         const GeneratorOptions& options = {});

// A process implementing `type`: output choices may drop branches, input
// choices may gain extra branches, annotations are sometimes omitted and
// payloads mix received variables with literals of the right class.
Process synthesize_process(Rng& rng, const SessionType& type, const SecurityContext& security);

struct GeneratedModel {
  SecurityContext security;
  Session session;
  GlobalType global;
};

// A projectable global type with a process synthesized per participant.
// Not necessarily typable.
GeneratedModel generate_model(Rng& rng, const GeneratorOptions& options = {});

// Retries generate_model until check_session accepts, up to `attempts`.
std::optional<GeneratedModel> generate_typable_model(Rng& rng, const GeneratorOptions& options = {},
                                                     std::size_t attempts = 64);

// Closed, guarded session types and processes with no structural bias, for
// metatheory tests.
SessionType random_session_type(Rng& rng, const SecurityContext& security, std::size_t depth);
Process random_process(Rng& rng, const SecurityContext& security, std::size_t depth);

}  // namespace sessions
