#pragma once

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sessions/value.hpp"

namespace sessions {

struct SessionTypeNode;
struct GlobalTypeNode;
struct TypeBranch;
struct GlobalBranch;

// Local (session) types: unions of outputs, intersections of inputs,
// μ-recursion, type variables and end. Immutable shared handle; copies are
// cheap and compare structurally.
class SessionType {
 public:
  SessionType();  // end

  static SessionType end();
  static SessionType var(std::string name);
  static SessionType rec(std::string var, SessionType body);
  // Union of outputs towards `peer`.
  static SessionType out(Participant peer, std::vector<TypeBranch> branches);
  // Intersection of inputs from `peer`.
  static SessionType in(Participant peer, std::vector<TypeBranch> branches);

  const SessionTypeNode& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

  bool is_end() const;
  bool is_var() const;
  bool is_rec() const;
  bool is_out() const;
  bool is_in() const;

  std::strong_ordering operator<=>(const SessionType& other) const;
  bool operator==(const SessionType& other) const;

 private:
  explicit SessionType(std::shared_ptr<const SessionTypeNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const SessionTypeNode> node_;
};

struct TypeBranch {
  Label label;
  AnnotatedSort sort;
  SessionType next;

  auto operator<=>(const TypeBranch&) const = default;
  bool operator==(const TypeBranch&) const = default;
};

struct OutType {
  Participant peer;
  std::vector<TypeBranch> branches;
  auto operator<=>(const OutType&) const = default;
  bool operator==(const OutType&) const = default;
};

struct InType {
  Participant peer;
  std::vector<TypeBranch> branches;
  auto operator<=>(const InType&) const = default;
  bool operator==(const InType&) const = default;
};

struct RecType {
  std::string var;
  SessionType body;
  auto operator<=>(const RecType&) const = default;
  bool operator==(const RecType&) const = default;
};

struct VarType {
  std::string name;
  auto operator<=>(const VarType&) const = default;
  bool operator==(const VarType&) const = default;
};

struct EndType {
  auto operator<=>(const EndType&) const = default;
  bool operator==(const EndType&) const = default;
};

struct SessionTypeNode {
  std::variant<OutType, InType, RecType, VarType, EndType> v;
};

// Global types p → q : {λi(Si^{ℓi,φi}).Gi}, μ-recursion, variables and end.
class GlobalType {
 public:
  GlobalType();  // end

  static GlobalType end();
  static GlobalType var(std::string name);
  static GlobalType rec(std::string var, GlobalType body);
  static GlobalType comm(Participant from, Participant to,
                         std::vector<GlobalBranch> branches);

  const GlobalTypeNode& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

  std::strong_ordering operator<=>(const GlobalType& other) const;
  bool operator==(const GlobalType& other) const;

 private:
  explicit GlobalType(std::shared_ptr<const GlobalTypeNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const GlobalTypeNode> node_;
};

struct GlobalBranch {
  Label label;
  AnnotatedSort sort;
  GlobalType next;
  auto operator<=>(const GlobalBranch&) const = default;
  bool operator==(const GlobalBranch&) const = default;
};

struct CommGlobal {
  Participant from;
  Participant to;
  std::vector<GlobalBranch> branches;
  auto operator<=>(const CommGlobal&) const = default;
  bool operator==(const CommGlobal&) const = default;
};

struct RecGlobal {
  std::string var;
  GlobalType body;
  auto operator<=>(const RecGlobal&) const = default;
  bool operator==(const RecGlobal&) const = default;
};

struct VarGlobal {
  std::string name;
  auto operator<=>(const VarGlobal&) const = default;
  bool operator==(const VarGlobal&) const = default;
};

struct EndGlobal {
  auto operator<=>(const EndGlobal&) const = default;
  bool operator==(const EndGlobal&) const = default;
};

struct GlobalTypeNode {
  std::variant<CommGlobal, RecGlobal, VarGlobal, EndGlobal> v;
};

// Well-formedness: nonempty choices with pairwise distinct labels, guarded
// recursion, no free type variables (unless `allow_free`), and for global
// types p ≠ q. Throws DuplicateLabel, Unguarded, FreeTypeVariable,
// SelfCommunication or EmptyChoice.
void wf_session_type(const SessionType& type, bool allow_free = false);
void wf_global_type(const GlobalType& type, bool allow_free = false);

std::set<std::string> free_type_vars(const SessionType& type);
std::set<std::string> free_type_vars(const GlobalType& type);

// T{replacement/var}; bound occurrences of `var` are left alone.
SessionType substitute(const SessionType& type, const std::string& var,
                       const SessionType& replacement);
GlobalType substitute(const GlobalType& type, const std::string& var,
                      const GlobalType& replacement);

// One unfolding of a top-level μ; other types are returned unchanged.
SessionType unfold(const SessionType& type);
GlobalType unfold(const GlobalType& type);

// Peels top-level μ binders until an output, input or end is exposed.
// Requires a guarded, closed type.
SessionType unfold_head(const SessionType& type);

// Canonical representative up to α-renaming of bound variables and branch
// order: branches sorted by label, binders renamed by nesting depth.
SessionType canonical(const SessionType& type);

}  // namespace sessions
