#include "sessions/checker.hpp"

#include <algorithm>
#include <set>

#include "overloaded.hpp"
#include "sessions/error.hpp"
#include "sessions/projection.hpp"
#include "sessions/semantics.hpp"
#include "sessions/type_relations.hpp"

namespace sessions {

using detail::overloaded;

namespace {

std::string show(const AnnotatedSort& s) {
  return std::string(to_string(s.sort)) + "^{" + s.level + "," + s.topic + "}";
}

void require_known(const AnnotatedSort& s, const SecurityContext& security) {
  if (!security.lattice.contains(s.level)) {
    throw Error(ErrorKind::UnknownLevel, "unknown level '" + s.level + "'");
  }
  if (!security.topics.contains(s.topic)) {
    throw Error(ErrorKind::UnknownTopic, "unknown topic '" + s.topic + "'");
  }
}

std::optional<SessionType> head_of(const std::optional<SessionType>& type) {
  if (!type) return std::nullopt;
  try {
    return unfold_head(*type);
  } catch (const Error&) {
    return std::nullopt;
  }
}

const TypeBranch* find_branch(const std::vector<TypeBranch>& branches, const Label& label) {
  for (const auto& b : branches) {
    if (b.label == label) return &b;
  }
  return nullptr;
}

class Elaborator {
 public:
  explicit Elaborator(const SecurityContext& security) : security_(security) {}

  Inference run(const Environment& env, const Process& p, const std::optional<SessionType>& guide,
                const std::string& path) {
    return std::visit(
        overloaded{
            [&](const OutputProc& o) { return output(env, o, guide, path); },
            [&](const InputProc& i) { return input(env, i, guide, path); },
            [&](const InternalChoiceProc&) { return choice(env, p, true, guide, path); },
            [&](const ExternalChoiceProc&) { return choice(env, p, false, guide, path); },
            [&](const RecProc& r) { return rec(env, r, guide, path); },
            [&](const VarProc& v) -> Inference {
              auto it = env.procs.find(v.name);
              if (it == env.procs.end()) {
                throw Error(ErrorKind::UnboundVariable, path + ": unbound process variable " + v.name);
              }
              return {it->second, {}};
            },
            [&](const InactProc&) { return Inference{SessionType::end(), {}}; },
        },
        p.node().v);
  }

 private:
  Inference output(const Environment& env, const OutputProc& o,
                   const std::optional<SessionType>& guide, const std::string& path) {
    AnnotatedSort sort = type_expr(env, o.payload, security_);
    std::string here = path + "/" + o.to + "!" + o.label;
    std::optional<SessionType> next_guide;
    if (auto head = head_of(guide)) {
      const auto* out = std::get_if<OutType>(&head->node().v);
      if (out == nullptr || out->peer != o.to) {
        throw Error(ErrorKind::TypeMismatch, here + ": output to " + o.to + " not expected here");
      }
      const auto* b = find_branch(out->branches, o.label);
      if (b == nullptr) {
        throw Error(ErrorKind::LabelNotOffered, here + ": label " + o.label + " not offered");
      }
      if (b->sort != sort) {
        throw Error(ErrorKind::SortOrAnnotationMismatch,
                    here + ": sends " + show(sort) + ", expected " + show(b->sort));
      }
      next_guide = b->next;
    }
    Inference next = run(env, o.next, next_guide, here);
    WriteSummary writes = meet(next.writes, {{sort.topic, sort.level}}, security_.lattice);
    return {SessionType::out(o.to, {{o.label, sort, next.type}}), std::move(writes)};
  }

  Inference input(const Environment& env, const InputProc& i,
                  const std::optional<SessionType>& guide, const std::string& path) {
    std::string here = path + "/" + i.from + "?" + i.label;
    std::optional<SessionType> next_guide;
    std::optional<AnnotatedSort> expected;
    if (auto head = head_of(guide)) {
      const auto* in = std::get_if<InType>(&head->node().v);
      if (in == nullptr || in->peer != i.from) {
        throw Error(ErrorKind::TypeMismatch, here + ": input from " + i.from + " not expected here");
      }
      if (const auto* b = find_branch(in->branches, i.label)) {
        expected = b->sort;
        next_guide = b->next;
      }
    }
    if (i.annotation) require_known(*i.annotation, security_);
    if (i.annotation && expected && *i.annotation != *expected) {
      throw Error(ErrorKind::SortOrAnnotationMismatch,
                  here + ": annotated " + show(*i.annotation) + ", expected " + show(*expected));
    }
    if (!i.annotation && !expected) {
      throw Error(ErrorKind::MissingAnnotation, here + ": input binder " + i.var + " needs a sort");
    }
    AnnotatedSort sort = i.annotation ? *i.annotation : *expected;
    Environment inner = env;
    inner.exprs[i.var] = sort;
    Inference next = run(inner, i.next, next_guide, here);
    return {SessionType::in(i.from, {{i.label, sort, next.type}}), std::move(next.writes)};
  }

  Inference choice(const Environment& env, const Process& p, bool internal,
                   const std::optional<SessionType>& guide, const std::string& path) {
    std::string here = path + (internal ? "/(+)" : "/+");
    std::optional<Participant> peer;
    std::vector<TypeBranch> branches;
    WriteSummary writes;
    bool first = true;
    for (const auto& summand : choice_summands(p, internal)) {
      Inference part = run(env, summand, guide, here);
      auto head = head_of(part.type);
      const std::vector<TypeBranch>* part_branches = nullptr;
      Participant part_peer;
      if (head) {
        if (internal) {
          if (const auto* out = std::get_if<OutType>(&head->node().v)) {
            part_branches = &out->branches;
            part_peer = out->peer;
          }
        } else if (const auto* in = std::get_if<InType>(&head->node().v)) {
          part_branches = &in->branches;
          part_peer = in->peer;
        }
      }
      if (part_branches == nullptr) {
        throw Error(ErrorKind::TypeMismatch,
                    here + ": every summand of " + (internal ? "an internal" : "an external") +
                        " choice must " + (internal ? "send" : "receive"));
      }
      if (peer && *peer != part_peer) {
        throw Error(ErrorKind::MixedPeers,
                    here + ": choice addresses both " + *peer + " and " + part_peer);
      }
      peer = part_peer;
      for (const auto& b : *part_branches) {
        if (find_branch(branches, b.label) != nullptr) {
          throw Error(ErrorKind::DuplicateLabel, here + ": label " + b.label + " appears twice");
        }
        branches.push_back(b);
      }
      writes = first ? part.writes : meet(writes, part.writes, security_.lattice);
      first = false;
    }
    SessionType type = internal ? SessionType::out(*peer, std::move(branches))
                                : SessionType::in(*peer, std::move(branches));
    return {type, std::move(writes)};
  }

  Inference rec(const Environment& env, const RecProc& r, const std::optional<SessionType>& guide,
                const std::string& path) {
    std::string here = path + "/rec " + r.var;
    Environment inner = env;
    if (r.annotation) {
      wf_session_type(*r.annotation);
      if (!safe_type(*r.annotation, security_)) {
        throw Error(ErrorKind::UnsafeType, here + ": annotation is not a safe type");
      }
      inner.procs[r.var] = *r.annotation;
      Inference body = run(inner, r.body, r.annotation, here);
      if (!subtype(body.type, *r.annotation)) {
        throw Error(ErrorKind::TypeMismatch, here + ": body does not match its annotation");
      }
      return {*r.annotation, std::move(body.writes)};
    }
    inner.procs[r.var] = SessionType::var(r.var);
    Inference body = run(inner, r.body, guide, here);
    if (!free_type_vars(body.type).contains(r.var)) return body;
    return {SessionType::rec(r.var, body.type), std::move(body.writes)};
  }

  const SecurityContext& security_;
};

}  // namespace

WriteSummary meet(const WriteSummary& a, const WriteSummary& b, const Lattice& lattice) {
  WriteSummary out = a;
  for (const auto& [topic, level] : b) {
    auto [it, inserted] = out.emplace(topic, level);
    if (!inserted) it->second = lattice.meet(it->second, level);
  }
  return out;
}

AnnotatedSort type_expr(const Environment& env, const Expr& expr, const SecurityContext& security) {
  return std::visit(
      overloaded{
          [&](const VarExpr& v) {
            auto it = env.exprs.find(v.name);
            if (it == env.exprs.end()) {
              throw Error(ErrorKind::UnboundVariable, "unbound variable " + v.name);
            }
            return it->second;
          },
          [&](const LitExpr& l) {
            AnnotatedSort s{l.value.sort(), l.value.level, l.value.topic};
            require_known(s, security);
            return s;
          },
          [&](const BinaryExpr& b) {
            AnnotatedSort lhs = type_expr(env, b.lhs, security);
            AnnotatedSort rhs = type_expr(env, b.rhs, security);
            if (lhs.topic != rhs.topic) {
              throw Error(ErrorKind::TopicMismatch, "operands of " + std::string(symbol(b.op)) +
                                                        " have topics " + lhs.topic + " and " +
                                                        rhs.topic);
            }
            auto sort = result_sort(b.op, lhs.sort, rhs.sort);
            if (!sort) {
              throw Error(ErrorKind::SortMismatch,
                          std::string(symbol(b.op)) + " is not defined on " +
                              std::string(to_string(lhs.sort)) + " and " +
                              std::string(to_string(rhs.sort)));
            }
            return AnnotatedSort{*sort, security.lattice.join(lhs.level, rhs.level), lhs.topic};
          },
          [&](const UnaryExpr& u) {
            AnnotatedSort operand = type_expr(env, u.operand, security);
            auto sort = result_sort(u.op, operand.sort);
            if (!sort) {
              throw Error(ErrorKind::SortMismatch, std::string(symbol(u.op)) +
                                                       " is not defined on " +
                                                       std::string(to_string(operand.sort)));
            }
            return AnnotatedSort{*sort, operand.level, operand.topic};
          },
      },
      expr.node().v);
}

Inference infer_process(const Environment& env, const Process& process,
                        const SecurityContext& security) {
  return Elaborator(security).run(env, process, std::nullopt, "");
}

Inference check_process(const Environment& env, const Process& process,
                        const SessionType& expected, const SecurityContext& security) {
  wf_session_type(expected);
  if (auto why = unsafe_reason(expected, security)) {
    throw Error(ErrorKind::UnsafeType, "expected type is not safe: " + *why);
  }
  Inference inferred = Elaborator(security).run(env, process, expected, "");
  if (!subtype(inferred.type, expected)) {
    throw Error(ErrorKind::TypeMismatch, "process type is not a subtype of the expected type");
  }
  if (auto why = unsafe_reason(inferred.type, security)) {
    throw Error(ErrorKind::UnsafeType, "process type is not safe: " + *why);
  }
  return inferred;
}

SessionReport check_session(const Session& session, const GlobalType& global,
                            const SecurityContext& security) {
  wf_global_type(global);
  SessionReport report;
  auto fail = [&](ErrorKind kind, std::string detail) {
    if (!report.error) {
      report.error = kind;
      report.detail = std::move(detail);
    }
  };

  std::set<Participant> names;
  for (const auto& c : session.components) {
    if (!names.insert(c.participant).second) {
      fail(ErrorKind::DuplicateParticipant, "participant " + c.participant + " appears twice");
    }
  }
  for (const auto& p : participants(global)) {
    if (!names.contains(p)) {
      fail(ErrorKind::MissingParticipant, "global type mentions " + p + " which the session lacks");
    }
  }

  for (const auto& c : session.components) {
    ParticipantReport entry;
    entry.participant = c.participant;
    try {
      entry.projection = project(global, c.participant);
      if (auto why = unsafe_reason(*entry.projection, security)) {
        throw Error(ErrorKind::UnsafeType, "projection is not safe: " + *why);
      }
      Inference inferred = check_process({}, c.process, *entry.projection, security);
      entry.type = inferred.type;
      entry.writes = std::move(inferred.writes);
      entry.ok = true;
    } catch (const Error& e) {
      entry.error = e.kind();
      entry.detail = e.detail();
      fail(e.kind(), c.participant + ": " + e.detail());
    }
    report.participants.push_back(std::move(entry));
  }
  report.ok = !report.error.has_value();
  return report;
}

}  // namespace sessions
