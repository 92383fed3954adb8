#include "sessions/semantics.hpp"

#include <algorithm>
#include <map>

#include "overloaded.hpp"
#include "sessions/error.hpp"

namespace sessions {

using detail::overloaded;

Value eval_expr(const Expr& expr, const Lattice& lattice) {
  return std::visit(
      overloaded{
          [&](const VarExpr& v) -> Value {
            throw Error(ErrorKind::FreeVariable, "expression variable '" + v.name + "' is free");
          },
          [&](const LitExpr& l) -> Value {
            if (!lattice.contains(l.value.level)) {
              throw Error(ErrorKind::UnknownLevel, "unknown level '" + l.value.level + "'");
            }
            return l.value;
          },
          [&](const BinaryExpr& b) -> Value {
            Value lhs = eval_expr(b.lhs, lattice);
            Value rhs = eval_expr(b.rhs, lattice);
            if (lhs.topic != rhs.topic) {
              throw Error(ErrorKind::MixedTopics, "operands of '" + std::string(symbol(b.op)) +
                                                      "' have topics '" + lhs.topic + "' and '" +
                                                      rhs.topic + "'");
            }
            return Value{sessions::apply(b.op, lhs.payload, rhs.payload), lattice.join(lhs.level, rhs.level),
                         lhs.topic};
          },
          [&](const UnaryExpr& u) -> Value {
            Value operand = eval_expr(u.operand, lattice);
            return Value{sessions::apply(u.op, operand.payload), operand.level, operand.topic};
          },
      },
      expr.node().v);
}

Expr substitute(const Expr& expr, const std::string& var, const Value& value) {
  return std::visit(overloaded{
                        [&](const VarExpr& v) { return v.name == var ? Expr::lit(value) : expr; },
                        [&](const LitExpr&) { return expr; },
                        [&](const BinaryExpr& b) {
                          return Expr::binary(b.op, substitute(b.lhs, var, value),
                                              substitute(b.rhs, var, value));
                        },
                        [&](const UnaryExpr& u) {
                          return Expr::unary(u.op, substitute(u.operand, var, value));
                        },
                    },
                    expr.node().v);
}

Process substitute(const Process& process, const std::string& var, const Value& value) {
  return std::visit(
      overloaded{
          [&](const OutputProc& o) {
            return Process::output(o.to, o.label, substitute(o.payload, var, value),
                                   substitute(o.next, var, value));
          },
          [&](const InputProc& i) {
            if (i.var == var) return process;
            return Process::input(i.from, i.label, i.var, i.annotation,
                                  substitute(i.next, var, value));
          },
          [&](const InternalChoiceProc& c) {
            return Process::internal_choice(substitute(c.left, var, value),
                                            substitute(c.right, var, value));
          },
          [&](const ExternalChoiceProc& c) {
            return Process::external_choice(substitute(c.left, var, value),
                                            substitute(c.right, var, value));
          },
          [&](const RecProc& r) {
            return Process::rec(r.var, substitute(r.body, var, value), r.annotation);
          },
          [&](const VarProc&) { return process; },
          [&](const InactProc&) { return process; },
      },
      process.node().v);
}

Process substitute_process(const Process& process, const std::string& var,
                           const Process& replacement) {
  return std::visit(
      overloaded{
          [&](const OutputProc& o) {
            return Process::output(o.to, o.label, o.payload,
                                   substitute_process(o.next, var, replacement));
          },
          [&](const InputProc& i) {
            return Process::input(i.from, i.label, i.var, i.annotation,
                                  substitute_process(i.next, var, replacement));
          },
          [&](const InternalChoiceProc& c) {
            return Process::internal_choice(substitute_process(c.left, var, replacement),
                                            substitute_process(c.right, var, replacement));
          },
          [&](const ExternalChoiceProc& c) {
            return Process::external_choice(substitute_process(c.left, var, replacement),
                                            substitute_process(c.right, var, replacement));
          },
          [&](const RecProc& r) {
            if (r.var == var) return process;
            return Process::rec(r.var, substitute_process(r.body, var, replacement), r.annotation);
          },
          [&](const VarProc& v) { return v.name == var ? replacement : process; },
          [&](const InactProc&) { return process; },
      },
      process.node().v);
}

namespace {

void expr_vars(const Expr& expr, const std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const VarExpr& v) {
                   if (!bound.contains(v.name)) out.insert(v.name);
                 },
                 [](const LitExpr&) {},
                 [&](const BinaryExpr& b) {
                   expr_vars(b.lhs, bound, out);
                   expr_vars(b.rhs, bound, out);
                 },
                 [&](const UnaryExpr& u) { expr_vars(u.operand, bound, out); },
             },
             expr.node().v);
}

// Collects free expression variables (`processes` false) or free process
// variables (`processes` true).
void free_vars(const Process& process, bool processes, std::set<std::string> bound,
               std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const OutputProc& o) {
                   if (!processes) expr_vars(o.payload, bound, out);
                   free_vars(o.next, processes, bound, out);
                 },
                 [&](const InputProc& i) {
                   if (!processes) bound.insert(i.var);
                   free_vars(i.next, processes, bound, out);
                 },
                 [&](const InternalChoiceProc& c) {
                   free_vars(c.left, processes, bound, out);
                   free_vars(c.right, processes, bound, out);
                 },
                 [&](const ExternalChoiceProc& c) {
                   free_vars(c.left, processes, bound, out);
                   free_vars(c.right, processes, bound, out);
                 },
                 [&](const RecProc& r) {
                   if (processes) bound.insert(r.var);
                   free_vars(r.body, processes, bound, out);
                 },
                 [&](const VarProc& v) {
                   if (processes && !bound.contains(v.name)) out.insert(v.name);
                 },
                 [](const InactProc&) {},
             },
             process.node().v);
}

bool guarded(const Process& process, std::set<std::string> pending) {
  return std::visit(overloaded{
                        [&](const OutputProc& o) { return guarded(o.next, {}); },
                        [&](const InputProc& i) { return guarded(i.next, {}); },
                        [&](const InternalChoiceProc& c) {
                          return guarded(c.left, pending) && guarded(c.right, pending);
                        },
                        [&](const ExternalChoiceProc& c) {
                          return guarded(c.left, pending) && guarded(c.right, pending);
                        },
                        [&](const RecProc& r) {
                          pending.insert(r.var);
                          return guarded(r.body, pending);
                        },
                        [&](const VarProc& v) { return !pending.contains(v.name); },
                        [](const InactProc&) { return true; },
                    },
                    process.node().v);
}

void collect_summands(const Process& process, bool internal, std::vector<Process>& out) {
  if (internal) {
    if (const auto* c = std::get_if<InternalChoiceProc>(&process.node().v)) {
      collect_summands(c->left, internal, out);
      collect_summands(c->right, internal, out);
      return;
    }
  } else if (const auto* c = std::get_if<ExternalChoiceProc>(&process.node().v)) {
    collect_summands(c->left, internal, out);
    collect_summands(c->right, internal, out);
    return;
  }
  out.push_back(process);
}

Process normalize_guarded(const Process& process) {
  return std::visit(
      overloaded{
          [&](const OutputProc& o) {
            return Process::output(o.to, o.label, o.payload, normalize_guarded(o.next));
          },
          [&](const InputProc& i) {
            return Process::input(i.from, i.label, i.var, i.annotation,
                                  normalize_guarded(i.next));
          },
          [&](const InternalChoiceProc&) {
            auto summands = choice_summands(process, true);
            for (auto& s : summands) s = normalize_guarded(s);
            // A normalized summand may itself be a choice of the same kind.
            std::vector<Process> flat;
            for (const auto& s : summands) collect_summands(s, true, flat);
            std::sort(flat.begin(), flat.end());
            return make_choice(flat, true);
          },
          [&](const ExternalChoiceProc&) {
            auto summands = choice_summands(process, false);
            for (auto& s : summands) s = normalize_guarded(s);
            std::vector<Process> flat;
            for (const auto& s : summands) collect_summands(s, false, flat);
            std::sort(flat.begin(), flat.end());
            return make_choice(flat, false);
          },
          [&](const RecProc& r) {
            return Process::rec(r.var, normalize_guarded(r.body), r.annotation);
          },
          [&](const VarProc&) { return process; },
          [&](const InactProc&) { return process; },
      },
      process.node().v);
}

void append_unique(std::vector<ProcessStep>& steps) {
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
}

}  // namespace

std::set<std::string> free_expr_vars(const Process& process) {
  std::set<std::string> out;
  free_vars(process, false, {}, out);
  return out;
}

std::set<std::string> free_process_vars(const Process& process) {
  std::set<std::string> out;
  free_vars(process, true, {}, out);
  return out;
}

bool is_guarded(const Process& process) { return guarded(process, {}); }

std::vector<Process> choice_summands(const Process& process, bool internal) {
  std::vector<Process> out;
  collect_summands(process, internal, out);
  return out;
}

Process make_choice(const std::vector<Process>& summands, bool internal) {
  if (summands.empty()) throw Error(ErrorKind::InvalidArgument, "choice needs a summand");
  Process result = summands.back();
  for (auto it = summands.rbegin() + 1; it != summands.rend(); ++it) {
    result = internal ? Process::internal_choice(*it, result)
                      : Process::external_choice(*it, result);
  }
  return result;
}

Process normalize_process(const Process& process) {
  if (!is_guarded(process)) throw Error(ErrorKind::Unguarded, "process has unguarded recursion");
  return normalize_guarded(process);
}

Session normalize_session(const Session& session) {
  Session out;
  for (const auto& c : session.components) {
    auto normal = normalize_process(c.process);
    if (!normal.is_inact()) out.components.push_back({c.participant, std::move(normal)});
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

Process unfold(const Process& process) {
  const auto* r = std::get_if<RecProc>(&process.node().v);
  if (r == nullptr) throw Error(ErrorKind::NotARecursion, "process is not a recursion");
  return substitute_process(r->body, r->var, process);
}

Process ProcessStep::resolve(const Value& received) const {
  if (kind != ActionKind::Receive) return next;
  return substitute(next, binder, received);
}

namespace {

std::vector<ProcessStep> step_impl(const Process& process, const Lattice& lattice,
                                   std::size_t unfoldings) {
  if (unfoldings > 1024) throw Error(ErrorKind::Unguarded, "process has unguarded recursion");
  return std::visit(
      overloaded{
          [&](const OutputProc& o) -> std::vector<ProcessStep> {
            return {ProcessStep{ActionKind::Send, o.to, o.label, eval_expr(o.payload, lattice),
                                "", o.next}};
          },
          [&](const InputProc& i) -> std::vector<ProcessStep> {
            return {ProcessStep{ActionKind::Receive, i.from, i.label, std::nullopt, i.var, i.next}};
          },
          [&](const InternalChoiceProc&) {
            // Up to associativity and commutativity the choice can be split
            // into any two nonempty sub-multisets; τ selects either part.
            auto summands = choice_summands(process, true);
            std::vector<ProcessStep> steps;
            const std::size_t n = summands.size();
            const std::size_t limit = std::size_t{1} << n;
            for (std::size_t mask = 1; mask + 1 < limit; ++mask) {
              std::vector<Process> part;
              for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::size_t{1} << i)) part.push_back(summands[i]);
              }
              steps.push_back(
                  ProcessStep{ActionKind::Tau, "", "", std::nullopt, "", make_choice(part, true)});
            }
            append_unique(steps);
            return steps;
          },
          [&](const ExternalChoiceProc&) {
            std::vector<ProcessStep> steps;
            for (const auto& summand : choice_summands(process, false)) {
              for (auto& step : step_impl(summand, lattice, unfoldings)) {
                if (step.kind != ActionKind::Tau) steps.push_back(std::move(step));
              }
            }
            append_unique(steps);
            return steps;
          },
          [&](const RecProc&) { return step_impl(unfold(process), lattice, unfoldings + 1); },
          [&](const VarProc& v) -> std::vector<ProcessStep> {
            throw Error(ErrorKind::FreeVariable, "process variable '" + v.name + "' is free");
          },
          [](const InactProc&) { return std::vector<ProcessStep>{}; },
      },
      process.node().v);
}

}  // namespace

std::vector<ProcessStep> step_process(const Process& process, const Lattice& lattice) {
  return step_impl(process, lattice, 0);
}

void validate_session(const Session& session) {
  std::set<Participant> seen;
  for (const auto& c : session.components) {
    if (!seen.insert(c.participant).second) {
      throw Error(ErrorKind::DuplicateParticipant,
                  "participant '" + c.participant + "' appears twice");
    }
    if (!is_guarded(c.process)) {
      throw Error(ErrorKind::Unguarded, "process of '" + c.participant + "' is unguarded");
    }
    if (auto vars = free_process_vars(c.process); !vars.empty()) {
      throw Error(ErrorKind::FreeVariable,
                  "process variable '" + *vars.begin() + "' is free in '" + c.participant + "'");
    }
    if (auto vars = free_expr_vars(c.process); !vars.empty()) {
      throw Error(ErrorKind::FreeVariable,
                  "expression variable '" + *vars.begin() + "' is free in '" + c.participant + "'");
    }
  }
}

std::vector<SessionStep> step_session(const Session& session, const Lattice& lattice) {
  const auto& components = session.components;
  std::vector<std::vector<ProcessStep>> local;
  local.reserve(components.size());
  for (const auto& c : components) local.push_back(step_process(c.process, lattice));

  std::vector<SessionStep> steps;
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (const auto& step : local[i]) {
      if (step.kind == ActionKind::Tau) {
        Session next = session;
        next.components[i].process = step.next;
        steps.push_back({Tau{}, std::move(next)});
        continue;
      }
      if (step.kind != ActionKind::Send) continue;
      for (std::size_t j = 0; j < components.size(); ++j) {
        if (j == i || components[j].participant != step.peer) continue;
        for (const auto& receive : local[j]) {
          if (receive.kind != ActionKind::Receive ||
              receive.peer != components[i].participant || receive.label != step.label) {
            continue;
          }
          Session next = session;
          next.components[i].process = step.next;
          next.components[j].process = receive.resolve(*step.value);
          steps.push_back({Message{components[i].participant, components[j].participant,
                                   step.label, *step.value},
                           std::move(next)});
        }
      }
    }
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

TraceSet traces(const Session& session, std::size_t depth, const Lattice& lattice) {
  TraceSet result{Trace{}};
  std::set<std::pair<Trace, Session>> frontier{{Trace{}, normalize_session(session)}};
  std::map<Session, std::vector<SessionStep>> successors;

  for (std::size_t level = 0; level < depth && !frontier.empty(); ++level) {
    std::set<std::pair<Trace, Session>> next_frontier;
    for (const auto& [trace, state] : frontier) {
      auto it = successors.find(state);
      if (it == successors.end()) {
        it = successors.emplace(state, step_session(state, lattice)).first;
      }
      for (const auto& step : it->second) {
        Trace extended = trace;
        extended.push_back(step.action);
        result.insert(extended);
        next_frontier.emplace(std::move(extended), normalize_session(step.next));
      }
    }
    frontier = std::move(next_frontier);
  }
  return result;
}

}  // namespace sessions
