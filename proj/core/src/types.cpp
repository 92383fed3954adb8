#include "sessions/types.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "sessions/error.hpp"
#include "overloaded.hpp"

namespace sessions {

namespace {

using detail::overloaded;

const SessionType& end_type() {
  static const SessionType end = SessionType::end();
  return end;
}

template <class Branch>
void require_distinct_labels(const std::vector<Branch>& branches, const std::string& where) {
  if (branches.empty()) throw Error(ErrorKind::EmptyChoice, "empty choice at " + where);
  std::set<Label> seen;
  for (const auto& b : branches) {
    if (!seen.insert(b.label).second) {
      throw Error(ErrorKind::DuplicateLabel, "label '" + b.label + "' repeated at " + where);
    }
  }
}

// `pending` holds the binders reachable from their μ without crossing a
// communication; meeting one of them as a variable means the μ is unguarded.
void wf_local(const SessionType& t, std::set<std::string>& bound, std::set<std::string> pending,
              bool allow_free) {
  std::visit(overloaded{
                 [&](const OutType& o) {
                   require_distinct_labels(o.branches, "output to " + o.peer);
                   for (const auto& b : o.branches) wf_local(b.next, bound, {}, allow_free);
                 },
                 [&](const InType& i) {
                   require_distinct_labels(i.branches, "input from " + i.peer);
                   for (const auto& b : i.branches) wf_local(b.next, bound, {}, allow_free);
                 },
                 [&](const RecType& r) {
                   bool was_bound = bound.contains(r.var);
                   bound.insert(r.var);
                   pending.insert(r.var);
                   wf_local(r.body, bound, pending, allow_free);
                   if (!was_bound) bound.erase(r.var);
                 },
                 [&](const VarType& v) {
                   if (pending.contains(v.name)) {
                     throw Error(ErrorKind::Unguarded, "recursion on '" + v.name + "' is unguarded");
                   }
                   if (!allow_free && !bound.contains(v.name)) {
                     throw Error(ErrorKind::FreeTypeVariable, "free type variable '" + v.name + "'");
                   }
                 },
                 [](const EndType&) {},
             },
             t.node().v);
}

void wf_global(const GlobalType& g, std::set<std::string>& bound, std::set<std::string> pending,
               bool allow_free) {
  std::visit(overloaded{
                 [&](const CommGlobal& c) {
                   if (c.from == c.to) {
                     throw Error(ErrorKind::SelfCommunication,
                                 "participant '" + c.from + "' communicates with itself");
                   }
                   require_distinct_labels(c.branches, c.from + " -> " + c.to);
                   for (const auto& b : c.branches) wf_global(b.next, bound, {}, allow_free);
                 },
                 [&](const RecGlobal& r) {
                   bool was_bound = bound.contains(r.var);
                   bound.insert(r.var);
                   pending.insert(r.var);
                   wf_global(r.body, bound, pending, allow_free);
                   if (!was_bound) bound.erase(r.var);
                 },
                 [&](const VarGlobal& v) {
                   if (pending.contains(v.name)) {
                     throw Error(ErrorKind::Unguarded, "recursion on '" + v.name + "' is unguarded");
                   }
                   if (!allow_free && !bound.contains(v.name)) {
                     throw Error(ErrorKind::FreeTypeVariable, "free type variable '" + v.name + "'");
                   }
                 },
                 [](const EndGlobal&) {},
             },
             g.node().v);
}

void collect_free(const SessionType& t, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const OutType& o) {
                   for (const auto& b : o.branches) collect_free(b.next, bound, out);
                 },
                 [&](const InType& i) {
                   for (const auto& b : i.branches) collect_free(b.next, bound, out);
                 },
                 [&](const RecType& r) {
                   bool was_bound = !bound.insert(r.var).second;
                   collect_free(r.body, bound, out);
                   if (!was_bound) bound.erase(r.var);
                 },
                 [&](const VarType& v) {
                   if (!bound.contains(v.name)) out.insert(v.name);
                 },
                 [](const EndType&) {},
             },
             t.node().v);
}

void collect_free(const GlobalType& g, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const CommGlobal& c) {
                   for (const auto& b : c.branches) collect_free(b.next, bound, out);
                 },
                 [&](const RecGlobal& r) {
                   bool was_bound = !bound.insert(r.var).second;
                   collect_free(r.body, bound, out);
                   if (!was_bound) bound.erase(r.var);
                 },
                 [&](const VarGlobal& v) {
                   if (!bound.contains(v.name)) out.insert(v.name);
                 },
                 [](const EndGlobal&) {},
             },
             g.node().v);
}

std::vector<TypeBranch> map_branches(const std::vector<TypeBranch>& branches,
                                     const std::function<SessionType(const SessionType&)>& f) {
  std::vector<TypeBranch> out;
  out.reserve(branches.size());
  for (const auto& b : branches) out.push_back({b.label, b.sort, f(b.next)});
  return out;
}

SessionType canonical_impl(const SessionType& t, std::map<std::string, std::string>& names,
                           std::size_t depth) {
  return std::visit(
      overloaded{
          [&](const OutType& o) {
            auto branches = map_branches(
                o.branches, [&](const SessionType& n) { return canonical_impl(n, names, depth); });
            std::sort(branches.begin(), branches.end(),
                      [](const auto& a, const auto& b) { return a.label < b.label; });
            return SessionType::out(o.peer, std::move(branches));
          },
          [&](const InType& i) {
            auto branches = map_branches(
                i.branches, [&](const SessionType& n) { return canonical_impl(n, names, depth); });
            std::sort(branches.begin(), branches.end(),
                      [](const auto& a, const auto& b) { return a.label < b.label; });
            return SessionType::in(i.peer, std::move(branches));
          },
          [&](const RecType& r) {
            std::string fresh = "t" + std::to_string(depth);
            auto saved = names.find(r.var) == names.end()
                             ? std::optional<std::string>()
                             : std::optional<std::string>(names[r.var]);
            names[r.var] = fresh;
            auto body = canonical_impl(r.body, names, depth + 1);
            if (saved) {
              names[r.var] = *saved;
            } else {
              names.erase(r.var);
            }
            return SessionType::rec(fresh, body);
          },
          [&](const VarType& v) {
            auto it = names.find(v.name);
            return SessionType::var(it == names.end() ? v.name : it->second);
          },
          [&](const EndType&) { return SessionType::end(); },
      },
      t.node().v);
}

}  // namespace

SessionType::SessionType() : SessionType(end_type()) {}

SessionType SessionType::end() {
  return SessionType(std::make_shared<const SessionTypeNode>(SessionTypeNode{EndType{}}));
}
SessionType SessionType::var(std::string name) {
  return SessionType(
      std::make_shared<const SessionTypeNode>(SessionTypeNode{VarType{std::move(name)}}));
}
SessionType SessionType::rec(std::string var, SessionType body) {
  return SessionType(std::make_shared<const SessionTypeNode>(
      SessionTypeNode{RecType{std::move(var), std::move(body)}}));
}
SessionType SessionType::out(Participant peer, std::vector<TypeBranch> branches) {
  return SessionType(std::make_shared<const SessionTypeNode>(
      SessionTypeNode{OutType{std::move(peer), std::move(branches)}}));
}
SessionType SessionType::in(Participant peer, std::vector<TypeBranch> branches) {
  return SessionType(std::make_shared<const SessionTypeNode>(
      SessionTypeNode{InType{std::move(peer), std::move(branches)}}));
}

bool SessionType::is_end() const { return std::holds_alternative<EndType>(node_->v); }
bool SessionType::is_var() const { return std::holds_alternative<VarType>(node_->v); }
bool SessionType::is_rec() const { return std::holds_alternative<RecType>(node_->v); }
bool SessionType::is_out() const { return std::holds_alternative<OutType>(node_->v); }
bool SessionType::is_in() const { return std::holds_alternative<InType>(node_->v); }

std::strong_ordering SessionType::operator<=>(const SessionType& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  return node_->v <=> other.node_->v;
}
bool SessionType::operator==(const SessionType& other) const {
  return node_ == other.node_ || node_->v == other.node_->v;
}

namespace {
const GlobalType& end_global() {
  static const GlobalType end = GlobalType::end();
  return end;
}
}  // namespace

GlobalType::GlobalType() : GlobalType(end_global()) {}

GlobalType GlobalType::end() {
  return GlobalType(std::make_shared<const GlobalTypeNode>(GlobalTypeNode{EndGlobal{}}));
}
GlobalType GlobalType::var(std::string name) {
  return GlobalType(
      std::make_shared<const GlobalTypeNode>(GlobalTypeNode{VarGlobal{std::move(name)}}));
}
GlobalType GlobalType::rec(std::string var, GlobalType body) {
  return GlobalType(std::make_shared<const GlobalTypeNode>(
      GlobalTypeNode{RecGlobal{std::move(var), std::move(body)}}));
}
GlobalType GlobalType::comm(Participant from, Participant to, std::vector<GlobalBranch> branches) {
  return GlobalType(std::make_shared<const GlobalTypeNode>(
      GlobalTypeNode{CommGlobal{std::move(from), std::move(to), std::move(branches)}}));
}

std::strong_ordering GlobalType::operator<=>(const GlobalType& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  return node_->v <=> other.node_->v;
}
bool GlobalType::operator==(const GlobalType& other) const {
  return node_ == other.node_ || node_->v == other.node_->v;
}

void wf_session_type(const SessionType& type, bool allow_free) {
  std::set<std::string> bound;
  wf_local(type, bound, {}, allow_free);
}

void wf_global_type(const GlobalType& type, bool allow_free) {
  std::set<std::string> bound;
  wf_global(type, bound, {}, allow_free);
}

std::set<std::string> free_type_vars(const SessionType& type) {
  std::set<std::string> bound, out;
  collect_free(type, bound, out);
  return out;
}

std::set<std::string> free_type_vars(const GlobalType& type) {
  std::set<std::string> bound, out;
  collect_free(type, bound, out);
  return out;
}

SessionType substitute(const SessionType& type, const std::string& var,
                       const SessionType& replacement) {
  return std::visit(
      overloaded{
          [&](const OutType& o) {
            return SessionType::out(o.peer, map_branches(o.branches, [&](const SessionType& n) {
                                      return substitute(n, var, replacement);
                                    }));
          },
          [&](const InType& i) {
            return SessionType::in(i.peer, map_branches(i.branches, [&](const SessionType& n) {
                                     return substitute(n, var, replacement);
                                   }));
          },
          [&](const RecType& r) {
            if (r.var == var) return type;
            return SessionType::rec(r.var, substitute(r.body, var, replacement));
          },
          [&](const VarType& v) { return v.name == var ? replacement : type; },
          [&](const EndType&) { return type; },
      },
      type.node().v);
}

GlobalType substitute(const GlobalType& type, const std::string& var,
                      const GlobalType& replacement) {
  return std::visit(overloaded{
                        [&](const CommGlobal& c) {
                          std::vector<GlobalBranch> branches;
                          for (const auto& b : c.branches) {
                            branches.push_back(
                                {b.label, b.sort, substitute(b.next, var, replacement)});
                          }
                          return GlobalType::comm(c.from, c.to, std::move(branches));
                        },
                        [&](const RecGlobal& r) {
                          if (r.var == var) return type;
                          return GlobalType::rec(r.var, substitute(r.body, var, replacement));
                        },
                        [&](const VarGlobal& v) { return v.name == var ? replacement : type; },
                        [&](const EndGlobal&) { return type; },
                    },
                    type.node().v);
}

SessionType unfold(const SessionType& type) {
  if (const auto* r = std::get_if<RecType>(&type.node().v)) {
    return substitute(r->body, r->var, type);
  }
  return type;
}

GlobalType unfold(const GlobalType& type) {
  if (const auto* r = std::get_if<RecGlobal>(&type.node().v)) {
    return substitute(r->body, r->var, type);
  }
  return type;
}

SessionType unfold_head(const SessionType& type) {
  SessionType current = type;
  // A guarded closed type exposes its head after at most one unfolding per
  // nested binder; the bound guards against malformed input.
  for (std::size_t guard = 0; current.is_rec(); ++guard) {
    if (guard > 4096) throw Error(ErrorKind::Unguarded, "type does not expose a head");
    current = unfold(current);
  }
  if (current.is_var()) {
    throw Error(ErrorKind::FreeTypeVariable,
                "free type variable '" + std::get<VarType>(current.node().v).name + "'");
  }
  return current;
}

SessionType canonical(const SessionType& type) {
  std::map<std::string, std::string> names;
  return canonical_impl(type, names, 0);
}

}  // namespace sessions
