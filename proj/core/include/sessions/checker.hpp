#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sessions/error.hpp"
#include "sessions/process.hpp"
#include "sessions/security.hpp"
#include "sessions/types.hpp"

namespace sessions {

// Γ: expression variables with their annotated sorts, process variables with
// their session types.
struct Environment {
  std::map<std::string, AnnotatedSort> exprs;
  std::map<std::string, SessionType> procs;
};

// Δ: the lowest level written on each topic. Absent topics count as ⊤.
using WriteSummary = std::map<Topic, Level>;

WriteSummary meet(const WriteSummary& a, const WriteSummary& b, const Lattice& lattice);

// Throws UnboundVariable, TopicMismatch, SortMismatch, UnknownLevel,
// UnknownTopic.
AnnotatedSort type_expr(const Environment& env, const Expr& expr, const SecurityContext& security);

struct Inference {
  SessionType type;
  WriteSummary writes;
};

// The syntax-directed type of P. Choices merge their summands into one
// union or intersection; μX.P without an annotation becomes μX.T with X a
// type variable, μX:T.P is checked against T and typed as T. Throws
// MissingAnnotation, MixedPeers, DuplicateLabel, TypeMismatch, UnsafeType
// and the errors of type_expr.
Inference infer_process(const Environment& env, const Process& process,
                        const SecurityContext& security);

// Γ ⊢ P : T for some safe T ≤ expected. `expected` must be closed and safe.
// Input annotations may be omitted where `expected` supplies the sort.
// Throws TypeMismatch, UnsafeType, LabelNotOffered, SortOrAnnotationMismatch,
// MissingAnnotation, MixedPeers, DuplicateLabel and the errors of type_expr.
// Returns the inferred type.
Inference check_process(const Environment& env, const Process& process,
                        const SessionType& expected, const SecurityContext& security);

struct ParticipantReport {
  Participant participant;
  bool ok = false;
  std::optional<SessionType> projection;
  std::optional<SessionType> type;
  WriteSummary writes;
  std::optional<ErrorKind> error;
  std::string detail;
};

struct SessionReport {
  bool ok = false;
  std::optional<ErrorKind> error;  // first failure, if any
  std::string detail;
  std::vector<ParticipantReport> participants;
};

// N ⊢ G: participants distinct, PART(G) among them, and each process checked
// against its (safe) projection. Type errors are reported, not thrown.
SessionReport check_session(const Session& session, const GlobalType& global,
                            const SecurityContext& security);

}  // namespace sessions
