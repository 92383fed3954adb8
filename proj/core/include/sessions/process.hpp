#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sessions/types.hpp"
#include "sessions/value.hpp"

namespace sessions {

struct ExprNode;

class Expr {
 public:
  static Expr var(std::string name);
  static Expr lit(Value value);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr unary(UnaryOp op, Expr operand);

  const ExprNode& node() const { return *node_; }

  std::strong_ordering operator<=>(const Expr& other) const;
  bool operator==(const Expr& other) const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct VarExpr {
  std::string name;
  auto operator<=>(const VarExpr&) const = default;
  bool operator==(const VarExpr&) const = default;
};

struct LitExpr {
  Value value;
  auto operator<=>(const LitExpr&) const = default;
  bool operator==(const LitExpr&) const = default;
};

struct BinaryExpr {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
  auto operator<=>(const BinaryExpr&) const = default;
  bool operator==(const BinaryExpr&) const = default;
};

struct UnaryExpr {
  UnaryOp op;
  Expr operand;
  auto operator<=>(const UnaryExpr&) const = default;
  bool operator==(const UnaryExpr&) const = default;
};

struct ExprNode {
  std::variant<VarExpr, LitExpr, BinaryExpr, UnaryExpr> v;
};

struct ProcessNode;

// Processes: q!λ(e).P, p?λ(x).P, P ⊕ Q, P + Q, μX.P, X and 0. Immutable
// shared handle with structural comparison.
class Process {
 public:
  Process();  // 0

  static Process inact();
  static Process output(Participant to, Label label, Expr payload, Process next);
  static Process input(Participant from, Label label, std::string var,
                       std::optional<AnnotatedSort> annotation, Process next);
  static Process internal_choice(Process left, Process right);
  static Process external_choice(Process left, Process right);
  static Process rec(std::string var, Process body,
                     std::optional<SessionType> annotation = std::nullopt);
  static Process var(std::string name);

  const ProcessNode& node() const { return *node_; }
  bool is_inact() const;

  std::strong_ordering operator<=>(const Process& other) const;
  bool operator==(const Process& other) const;

 private:
  explicit Process(std::shared_ptr<const ProcessNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ProcessNode> node_;
};

struct OutputProc {
  Participant to;
  Label label;
  Expr payload;
  Process next;
  auto operator<=>(const OutputProc&) const = default;
  bool operator==(const OutputProc&) const = default;
};

struct InputProc {
  Participant from;
  Label label;
  std::string var;
  std::optional<AnnotatedSort> annotation;
  Process next;
  auto operator<=>(const InputProc&) const = default;
  bool operator==(const InputProc&) const = default;
};

struct InternalChoiceProc {
  Process left;
  Process right;
  auto operator<=>(const InternalChoiceProc&) const = default;
  bool operator==(const InternalChoiceProc&) const = default;
};

struct ExternalChoiceProc {
  Process left;
  Process right;
  auto operator<=>(const ExternalChoiceProc&) const = default;
  bool operator==(const ExternalChoiceProc&) const = default;
};

struct RecProc {
  std::string var;
  std::optional<SessionType> annotation;
  Process body;
  auto operator<=>(const RecProc&) const = default;
  bool operator==(const RecProc&) const = default;
};

struct VarProc {
  std::string name;
  auto operator<=>(const VarProc&) const = default;
  bool operator==(const VarProc&) const = default;
};

struct InactProc {
  auto operator<=>(const InactProc&) const = default;
  bool operator==(const InactProc&) const = default;
};

struct ProcessNode {
  std::variant<OutputProc, InputProc, InternalChoiceProc, ExternalChoiceProc, RecProc, VarProc,
               InactProc>
      v;
};

struct Component {
  Participant participant;
  Process process;
  auto operator<=>(const Component&) const = default;
  bool operator==(const Component&) const = default;
};

// p1 ◃ P1 | ... | pn ◃ Pn
struct Session {
  std::vector<Component> components;
  auto operator<=>(const Session&) const = default;
  bool operator==(const Session&) const = default;
};

// p → q : λ(v^{ℓ,φ})
struct Message {
  Participant from;
  Participant to;
  Label label;
  Value value;
  auto operator<=>(const Message&) const = default;
  bool operator==(const Message&) const = default;
};

struct Tau {
  auto operator<=>(const Tau&) const = default;
  bool operator==(const Tau&) const = default;
};

using SessionAction = std::variant<Tau, Message>;
using Trace = std::vector<SessionAction>;

inline const Message* as_message(const SessionAction& action) {
  return std::get_if<Message>(&action);
}

// Shortlex order: shorter traces first, then lexicographic.
struct ShortlexLess {
  bool operator()(const Trace& a, const Trace& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace sessions
