#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sessions/process.hpp"
#include "sessions/security.hpp"

namespace sessions {

// e ↓ v^{ℓ,φ}: all literals must share one topic (MixedTopics otherwise);
// the level is the join of the literal levels. Throws SortMismatch,
// FreeVariable, UnknownLevel.
Value eval_expr(const Expr& expr, const Lattice& lattice);

Expr substitute(const Expr& expr, const std::string& var, const Value& value);
// P{v/x}; input binders for x shadow.
Process substitute(const Process& process, const std::string& var, const Value& value);
// P{Q/X}; μX binders shadow. Q is expected to be closed.
Process substitute_process(const Process& process, const std::string& var,
                           const Process& replacement);

std::set<std::string> free_expr_vars(const Process& process);
std::set<std::string> free_process_vars(const Process& process);

// True when every path from μX to X crosses an input or output.
bool is_guarded(const Process& process);

// Canonical representative of the structural congruence class: choices of
// either kind are flattened and their summands sorted (duplicates kept);
// μ is never unfolded. Throws Unguarded.
Process normalize_process(const Process& process);
// Also drops p ◃ 0 components and orders components by participant.
Session normalize_session(const Session& session);

// μX.P ↦ P{μX.P/X}, one level. Throws NotARecursion.
Process unfold(const Process& process);

// Summands of a (possibly nested) choice of the given kind, left to right.
std::vector<Process> choice_summands(const Process& process, bool internal);
// Right-nested choice over nonempty `summands`.
Process make_choice(const std::vector<Process>& summands, bool internal);

enum class ActionKind { Tau, Send, Receive };

// One transition of a process. A Receive step is symbolic: `next` is the
// continuation with `binder` still free, resolved once the session layer
// knows the value.
struct ProcessStep {
  ActionKind kind = ActionKind::Tau;
  Participant peer;
  Label label;
  std::optional<Value> value;  // Send only
  std::string binder;          // Receive only
  Process next;

  Process resolve(const Value& received) const;

  auto operator<=>(const ProcessStep&) const = default;
  bool operator==(const ProcessStep&) const = default;
};

std::vector<ProcessStep> step_process(const Process& process, const Lattice& lattice);

struct SessionStep {
  SessionAction action;
  Session next;

  auto operator<=>(const SessionStep&) const = default;
  bool operator==(const SessionStep&) const = default;
};

// Throws DuplicateParticipant, Unguarded, FreeVariable.
void validate_session(const Session& session);

// All one-step successors. Components keep their positions; callers wanting
// canonical states should normalize.
std::vector<SessionStep> step_session(const Session& session, const Lattice& lattice);

using TraceSet = std::set<Trace, ShortlexLess>;

// Every trace of length ≤ depth, by breadth-first exploration. Always
// contains the empty trace.
TraceSet traces(const Session& session, std::size_t depth, const Lattice& lattice);

}  // namespace sessions
