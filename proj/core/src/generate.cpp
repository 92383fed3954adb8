#include "sessions/generate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include "overloaded.hpp"
#include "sessions/checker.hpp"
#include "sessions/error.hpp"
#include "sessions/projection.hpp"
#include "sessions/semantics.hpp"

namespace sessions {

using detail::overloaded;

namespace {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& items) {
  return items[pick(rng, items.size())];
}

Payload random_payload(Rng& rng, Sort sort) {
  switch (sort) {
    case Sort::Nat: return std::uint64_t{pick(rng, 10)};
    case Sort::Int: return static_cast<std::int64_t>(pick(rng, 21)) - 10;
    case Sort::Bool: return chance(rng, 0.5);
    case Sort::Str: return std::string("v") + std::to_string(pick(rng, 10));
  }
  return std::uint64_t{0};
}

Sort random_sort(Rng& rng) { return static_cast<Sort>(pick(rng, 4)); }

AnnotatedSort random_annotated(Rng& rng, const SecurityContext& security) {
  return {random_sort(rng), choose(rng, security.lattice.levels()),
          choose(rng, security.topics.topics())};
}

BinaryOp combining_op(Sort sort) {
  switch (sort) {
    case Sort::Nat: return BinaryOp::Add;
    case Sort::Int: return BinaryOp::Sub;
    case Sort::Bool: return BinaryOp::And;
    case Sort::Str: return BinaryOp::Concat;
  }
  return BinaryOp::Add;
}

struct Bound {
  std::string var;
  AnnotatedSort sort;
};

// An expression of exactly the annotated sort `target`, possibly built from
// a variable in scope.
Expr payload_for(Rng& rng, const AnnotatedSort& target, const std::vector<Bound>& scope,
                 const Lattice& lattice) {
  std::vector<const Bound*> usable;
  for (const auto& b : scope) {
    if (b.sort.sort == target.sort && b.sort.topic == target.topic &&
        lattice.leq(b.sort.level, target.level)) {
      usable.push_back(&b);
    }
  }
  Expr literal = Expr::lit(Value{random_payload(rng, target.sort), target.level, target.topic});
  if (usable.empty() || chance(rng, 0.4)) return literal;
  const Bound& b = *choose(rng, usable);
  if (b.sort == target && chance(rng, 0.5)) return Expr::var(b.var);
  return Expr::binary(combining_op(target.sort), Expr::var(b.var), literal);
}

// ---- global types ----------------------------------------------------------

struct GlobalGen {
  Rng& rng;
  const SecurityContext& security;
  const std::vector<Participant>& participants;
  const GeneratorOptions& options;
  std::optional<std::string> loop_var;
  std::size_t fresh = 0;

  using Received = std::map<Participant, std::vector<std::pair<Level, Topic>>>;

  // A class (level, topic) p can send to q without breaking AC or agreement
  // with what p has received on this path.
  std::optional<std::pair<Level, Topic>> classify(const Participant& p, const Participant& q,
                                                  const Received& received) {
    const auto& lattice = security.lattice;
    auto topics = security.topics.topics();
    std::shuffle(topics.begin(), topics.end(), rng);
    for (const auto& topic : topics) {
      Level floor = lattice.bottom();
      if (auto it = received.find(p); it != received.end()) {
        for (const auto& [l, t] : it->second) {
          if (security.topics.related(t, topic)) floor = lattice.join(floor, l);
        }
      }
      const auto& ceiling = security.policy.reading_level(q, topic);
      std::vector<Level> candidates;
      for (const auto& l : lattice.levels()) {
        if (lattice.leq(floor, l) && lattice.leq(l, ceiling)) candidates.push_back(l);
      }
      if (!candidates.empty()) return std::make_pair(choose(rng, candidates), topic);
    }
    return std::nullopt;
  }

  GlobalType leaf(bool guarded) {
    if (loop_var && guarded && chance(rng, 0.6)) return GlobalType::var(*loop_var);
    return GlobalType::end();
  }

  GlobalType gen(std::size_t depth, bool guarded, bool may_loop, Received received,
                 const std::vector<Participant>& pool) {
    if (may_loop && !loop_var && chance(rng, options.recursion)) {
      loop_var = "t";
      GlobalType body = gen(depth, false, false, received, pool);
      if (!free_type_vars(body).contains("t")) return body;
      return GlobalType::rec("t", body);
    }
    if (depth == 0 || (guarded && chance(rng, 0.15))) return leaf(guarded);
    std::size_t a = pick(rng, pool.size());
    std::size_t b = (a + 1 + pick(rng, pool.size() - 1)) % pool.size();
    const Participant& p = pool[a];
    const Participant& q = pool[b];
    std::size_t count = 1 + pick(rng, options.max_branches);
    bool shared = count == 1 || pool.size() == 2 || chance(rng, 0.5);
    std::vector<GlobalBranch> branches;
    std::optional<GlobalType> common;
    for (std::size_t k = 0; k < count; ++k) {
      auto cls = classify(p, q, received);
      if (!cls) break;
      AnnotatedSort sort{random_sort(rng), cls->first, cls->second};
      Received next_received = received;
      next_received[q].push_back(*cls);
      GlobalType next;
      if (shared) {
        // Built under the first branch's floors; later branches may break
        // agreement, which callers filter out by type checking.
        if (!common) common = gen(depth - 1, true, !loop_var, next_received, pool);
        next = *common;
      } else {
        next = gen(depth - 1, true, false, next_received, {p, q});
      }
      branches.push_back({"l" + std::to_string(k), sort, next});
    }
    if (branches.empty()) return leaf(guarded);
    return GlobalType::comm(p, q, std::move(branches));
  }
};

// ---- process synthesis -----------------------------------------------------

struct Synth {
  Rng& rng;
  const SecurityContext& security;
  std::size_t fresh = 0;

  std::string fresh_var() { return "x" + std::to_string(fresh++); }

  static std::string proc_var(const std::string& type_var) {
    std::string out = "X" + type_var;
    return out;
  }

  Process run(const SessionType& t, const std::vector<Bound>& scope) {
    return std::visit(
        overloaded{
            [&](const OutType& o) {
              std::vector<TypeBranch> kept = o.branches;
              std::shuffle(kept.begin(), kept.end(), rng);
              kept.resize(1 + pick(rng, kept.size()));
              std::vector<Process> summands;
              for (const auto& b : kept) {
                summands.push_back(Process::output(
                    o.peer, b.label, payload_for(rng, b.sort, scope, security.lattice),
                    run(b.next, scope)));
              }
              return make_choice(summands, true);
            },
            [&](const InType& i) {
              std::vector<Process> summands;
              for (const auto& b : i.branches) {
                std::string x = fresh_var();
                auto inner = scope;
                inner.push_back({x, b.sort});
                std::optional<AnnotatedSort> annotation;
                if (chance(rng, 0.6)) annotation = b.sort;
                summands.push_back(Process::input(i.peer, b.label, x, annotation, run(b.next, inner)));
              }
              if (chance(rng, 0.2)) {
                AnnotatedSort extra = random_annotated(rng, security);
                summands.push_back(
                    Process::input(i.peer, "extra", fresh_var(), extra, Process::inact()));
              }
              std::shuffle(summands.begin(), summands.end(), rng);
              return make_choice(summands, false);
            },
            [&](const RecType& r) { return Process::rec(proc_var(r.var), run(r.body, scope)); },
            [&](const VarType& v) { return Process::var(proc_var(v.name)); },
            [&](const EndType&) { return Process::inact(); },
        },
        t.node().v);
  }
};

Lattice random_lattice(Rng& rng) {
  switch (pick(rng, 3)) {
    case 0: {
      std::vector<CoverPair> covers{{"bot", "top"}};
      return Lattice::validate({"bot", "top"}, covers);
    }
    case 1: {
      std::vector<CoverPair> covers{{"bot", "mid"}, {"mid", "top"}};
      return Lattice::validate({"bot", "mid", "top"}, covers);
    }
    default: {
      std::vector<CoverPair> covers{{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}};
      return Lattice::validate({"bot", "a", "b", "top"}, covers);
    }
  }
}

}  // namespace

SecurityContext random_security(Rng& rng, const std::vector<Participant>& participants) {
  Lattice lattice = random_lattice(rng);
  std::vector<Topic> topics{"phi", "psi"};
  if (chance(rng, 0.5)) topics.push_back("chi");
  std::vector<std::pair<Topic, Topic>> indep;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    for (std::size_t j = i + 1; j < topics.size(); ++j) {
      if (chance(rng, 0.5)) indep.emplace_back(topics[i], topics[j]);
    }
  }
  TopicUniverse universe(topics, indep);
  ReadingPolicy::Entries entries;
  for (const auto& p : participants) {
    for (const auto& t : topics) {
      entries[{p, t}] = chance(rng, 0.6) ? lattice.top() : choose(rng, lattice.levels());
    }
  }
  ReadingPolicy policy(lattice, universe, entries);
  return SecurityContext{lattice, universe, policy};
}

GlobalType random_global(Rng& rng, const SecurityContext& security,
                         const std::vector<Participant>& participants,
                         const GeneratorOptions& options) {
  GlobalGen gen{rng, security, participants, options, std::nullopt, 0};
  return gen.gen(options.max_depth, false, true, {}, participants);
}

Process synthesize_process(Rng& rng, const SessionType& type, const SecurityContext& security) {
  Synth synth{rng, security, 0};
  return synth.run(type, {});
}

GeneratedModel generate_model(Rng& rng, const GeneratorOptions& options) {
  for (;;) {
    std::size_t span = options.max_participants - options.min_participants + 1;
    std::size_t n = options.min_participants + pick(rng, span);
    std::vector<Participant> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    SecurityContext security = random_security(rng, names);
    GlobalType global = random_global(rng, security, names, options);
    Session session;
    try {
      for (const auto& p : names) {
        session.components.push_back({p, synthesize_process(rng, project(global, p), security)});
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotProjectable) continue;
      throw;
    }
    return GeneratedModel{security, session, global};
  }
}

std::optional<GeneratedModel> generate_typable_model(Rng& rng, const GeneratorOptions& options,
                                                     std::size_t attempts) {
  for (std::size_t i = 0; i < attempts; ++i) {
    GeneratedModel model = generate_model(rng, options);
    if (check_session(model.session, model.global, model.security).ok) return model;
  }
  return std::nullopt;
}

SessionType random_session_type(Rng& rng, const SecurityContext& security, std::size_t depth) {
  std::vector<std::string> bound;
  std::function<SessionType(std::size_t, bool)> gen = [&](std::size_t d, bool guarded) {
    if (d == 0 || chance(rng, 0.15)) {
      if (guarded && !bound.empty() && chance(rng, 0.6)) return SessionType::var(choose(rng, bound));
      return SessionType::end();
    }
    if (chance(rng, 0.2)) {
      std::string var = "t" + std::to_string(bound.size());
      bound.push_back(var);
      SessionType body = gen(d, false);
      bound.pop_back();
      return free_type_vars(body).contains(var) ? SessionType::rec(var, body) : body;
    }
    std::vector<TypeBranch> branches;
    std::size_t count = 1 + pick(rng, 3);
    for (std::size_t k = 0; k < count; ++k) {
      branches.push_back({"l" + std::to_string(k), random_annotated(rng, security), gen(d - 1, true)});
    }
    Participant peer = "p" + std::to_string(pick(rng, 3));
    return chance(rng, 0.5) ? SessionType::out(peer, std::move(branches))
                            : SessionType::in(peer, std::move(branches));
  };
  return gen(depth, false);
}

Process random_process(Rng& rng, const SecurityContext& security, std::size_t depth) {
  std::vector<std::string> bound;
  std::vector<Bound> scope;
  std::size_t fresh = 0;
  std::function<Process(std::size_t, bool)> gen = [&](std::size_t d, bool guarded) -> Process {
    if (d == 0 || chance(rng, 0.1)) {
      if (guarded && !bound.empty() && chance(rng, 0.5)) return Process::var(choose(rng, bound));
      return Process::inact();
    }
    Participant peer = "p" + std::to_string(pick(rng, 3));
    switch (pick(rng, 5)) {
      case 0: {
        AnnotatedSort s = random_annotated(rng, security);
        return Process::output(peer, "l" + std::to_string(pick(rng, 2)),
                               payload_for(rng, s, scope, security.lattice), gen(d - 1, true));
      }
      case 1: {
        AnnotatedSort s = random_annotated(rng, security);
        std::string x = "x" + std::to_string(fresh++);
        scope.push_back({x, s});
        Process next = gen(d - 1, true);
        scope.pop_back();
        return Process::input(peer, "l" + std::to_string(pick(rng, 2)), x, s, next);
      }
      case 2: return Process::internal_choice(gen(d - 1, guarded), gen(d - 1, guarded));
      case 3: return Process::external_choice(gen(d - 1, guarded), gen(d - 1, guarded));
      default: {
        std::string var = "X" + std::to_string(bound.size());
        bound.push_back(var);
        Process body = gen(d, false);
        bound.pop_back();
        return Process::rec(var, body);
      }
    }
  };
  return gen(depth, false);
}

}  // namespace sessions
