#include "sessions/projection.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>

#include "overloaded.hpp"
#include "sessions/error.hpp"

namespace sessions {

using detail::overloaded;

namespace {

void collect(const GlobalType& g, std::set<Participant>& out) {
  std::visit(overloaded{
                 [&](const CommGlobal& c) {
                   out.insert(c.from);
                   out.insert(c.to);
                   for (const auto& b : c.branches) collect(b.next, out);
                 },
                 [&](const RecGlobal& r) { collect(r.body, out); },
                 [](const auto&) {},
             },
             g.node().v);
}

using PartEnv = std::map<std::string, std::set<Participant>>;

// Participants of G together with those reachable through its free
// variables, i.e. everyone taking part in the unfolding of G.
std::set<Participant> occurring(const GlobalType& g, const PartEnv& env) {
  std::set<Participant> out;
  collect(g, out);
  for (const auto& v : free_type_vars(g)) {
    if (auto it = env.find(v); it != env.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

SessionType project_in(const GlobalType& g, const Participant& r, PartEnv& env) {
  return std::visit(
      overloaded{
          [&](const CommGlobal& c) -> SessionType {
            if (r == c.from || r == c.to) {
              std::vector<TypeBranch> branches;
              for (const auto& b : c.branches) {
                branches.push_back({b.label, b.sort, project_in(b.next, r, env)});
              }
              return r == c.from ? SessionType::out(c.to, std::move(branches))
                                 : SessionType::in(c.from, std::move(branches));
            }
            SessionType first = project_in(c.branches.front().next, r, env);
            SessionType first_canon = canonical(first);
            for (std::size_t k = 1; k < c.branches.size(); ++k) {
              if (canonical(project_in(c.branches[k].next, r, env)) != first_canon) {
                throw Error(ErrorKind::NotProjectable,
                            "branches of " + c.from + " -> " + c.to + " differ for " + r);
              }
            }
            return first;
          },
          [&](const RecGlobal& rec) -> SessionType {
            auto parts = occurring(g, env);
            if (!parts.contains(r)) return SessionType::end();
            auto saved = env.find(rec.var) == env.end() ? std::optional<std::set<Participant>>()
                                                        : std::optional(env[rec.var]);
            env[rec.var] = parts;
            SessionType body = project_in(rec.body, r, env);
            if (saved) {
              env[rec.var] = *saved;
            } else {
              env.erase(rec.var);
            }
            // Strip binders that do not guard anything for r.
            SessionType peeled = body;
            while (peeled.is_rec()) peeled = std::get<RecType>(peeled.node().v).body;
            if (peeled.is_var() && std::get<VarType>(peeled.node().v).name == rec.var) {
              return SessionType::end();
            }
            if (!free_type_vars(body).contains(rec.var)) return body;
            return SessionType::rec(rec.var, body);
          },
          [&](const VarGlobal& v) { return SessionType::var(v.name); },
          [&](const EndGlobal&) { return SessionType::end(); },
      },
      g.node().v);
}

GlobalType residual_in(const GlobalType& g, const Participant& p, const Label& l,
                       const Participant& q, std::set<const void*>& unfolded) {
  return std::visit(
      overloaded{
          [&](const CommGlobal& c) -> GlobalType {
            if (c.from == p && c.to == q) {
              for (const auto& b : c.branches) {
                if (b.label == l) return b.next;
              }
              throw Error(ErrorKind::ResidualUndefined,
                          "no branch " + l + " in " + p + " -> " + q);
            }
            if (c.from == p || c.from == q || c.to == p || c.to == q) {
              throw Error(ErrorKind::ResidualUndefined,
                          c.from + " -> " + c.to + " precedes " + p + " -> " + q);
            }
            std::vector<GlobalBranch> branches;
            for (const auto& b : c.branches) {
              auto branch_seen = unfolded;
              branches.push_back({b.label, b.sort, residual_in(b.next, p, l, q, branch_seen)});
            }
            return GlobalType::comm(c.from, c.to, std::move(branches));
          },
          [&](const RecGlobal&) -> GlobalType {
            if (!unfolded.insert(g.identity()).second) {
              throw Error(ErrorKind::ResidualUndefined,
                          p + " -> " + q + " : " + l + " never happens on a loop");
            }
            return residual_in(unfold(g), p, l, q, unfolded);
          },
          [&](const VarGlobal& v) -> GlobalType {
            throw Error(ErrorKind::ResidualUndefined, "residual of variable " + v.name);
          },
          [&](const EndGlobal&) -> GlobalType {
            throw Error(ErrorKind::ResidualUndefined, "residual of end");
          },
      },
      g.node().v);
}

void collect_comms(const GlobalType& g,
                   std::set<std::tuple<Participant, Label, Participant>>& out) {
  std::visit(overloaded{
                 [&](const CommGlobal& c) {
                   for (const auto& b : c.branches) {
                     out.insert({c.from, b.label, c.to});
                     collect_comms(b.next, out);
                   }
                 },
                 [&](const RecGlobal& r) { collect_comms(r.body, out); },
                 [](const auto&) {},
             },
             g.node().v);
}

}  // namespace

std::set<Participant> participants(const GlobalType& global) {
  std::set<Participant> out;
  collect(global, out);
  return out;
}

SessionType project(const GlobalType& global, const Participant& participant) {
  PartEnv env;
  return project_in(global, participant, env);
}

GlobalType residual(const GlobalType& global, const Participant& from, const Label& label,
                    const Participant& to) {
  std::set<const void*> unfolded;
  return residual_in(global, from, label, to, unfolded);
}

std::vector<GlobalReduction> reduce_global(const GlobalType& global) {
  std::set<std::tuple<Participant, Label, Participant>> comms;
  collect_comms(global, comms);
  std::vector<GlobalReduction> out;
  for (const auto& [p, l, q] : comms) {
    try {
      out.push_back({p, l, q, residual(global, p, l, q)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ResidualUndefined) throw;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sessions
