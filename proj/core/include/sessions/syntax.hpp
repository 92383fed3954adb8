#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sessions/process.hpp"
#include "sessions/security.hpp"
#include "sessions/types.hpp"

namespace sessions {

// A parsed model file: the security setting plus named processes, sessions
// and global types, each kept in declaration order.
struct Model {
  SecurityContext security;
  std::vector<std::pair<std::string, Process>> processes;
  std::vector<std::pair<std::string, Session>> sessions;
  std::vector<std::pair<std::string, GlobalType>> globals;

  const Process* process(std::string_view name) const;
  const Session* session(std::string_view name) const;
  const GlobalType* global(std::string_view name) const;
};

// Same levels and order, topics and independence, policy, and definitions.
bool same_model(const Model& a, const Model& b);

// Grammar, whitespace-insensitive, `#` to end of line is a comment:
//
//   lattice { levels bot mid top; below bot mid; below mid top; }
//   topics { phi psi; indep phi psi; }
//   read p0 phi = top;     read default = bot;
//   proc P = q!l(e).P | p?l(x:S^{lv,tp}).P | P (+) P | P + P
//          | rec X . P | rec X : T . P | X | end | (P)
//   session N = p0 : P0 | p1 : P1
//   global G = p -> q : l(S^{lv,tp}) . G | p -> q : {l1(S).G1, l2(S).G2}
//            | rec t . G | t | end
//   T = q!l(S).T | q!{l1(S).T1, ...} | p?l(S).T | p?{...} | rec t . T | t | end
//
// Process names and variables start with an upper-case letter. `(+)` binds
// looser than `+`; prefixes and rec bind tighter than both.
// Processes named in other processes or sessions are inlined. Throws
// SyntaxError, UnknownIdentifier, DuplicateDefinition and the lattice and
// policy validation errors; messages carry line:col.
Model parse_model(std::string_view text);

Process parse_process(std::string_view text);
Expr parse_expr(std::string_view text);
SessionType parse_session_type(std::string_view text);
GlobalType parse_global_type(std::string_view text);

std::string to_string(const Payload& payload);
std::string to_string(const Value& value);
std::string to_string(const AnnotatedSort& sort);
std::string to_string(const Expr& expr);
std::string to_string(const Process& process);
std::string to_string(const Session& session);
std::string to_string(const SessionType& type);
std::string to_string(const GlobalType& type);
std::string to_string(const SessionAction& action);
std::string to_string(const Model& model);

std::ostream& operator<<(std::ostream& os, const Value& value);
std::ostream& operator<<(std::ostream& os, const AnnotatedSort& sort);
std::ostream& operator<<(std::ostream& os, const Expr& expr);
std::ostream& operator<<(std::ostream& os, const Process& process);
std::ostream& operator<<(std::ostream& os, const Session& session);
std::ostream& operator<<(std::ostream& os, const SessionType& type);
std::ostream& operator<<(std::ostream& os, const GlobalType& type);
std::ostream& operator<<(std::ostream& os, const SessionAction& action);

}  // namespace sessions
