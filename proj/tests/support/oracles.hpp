#pragma once

// Independent reference implementations used by the tests. They favour
// brute force over speed and share no code with the library beyond the AST.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sessions/error.hpp"
#include "sessions/generate.hpp"
#include "sessions/projection.hpp"
#include "sessions/process.hpp"
#include "sessions/security.hpp"
#include "sessions/syntax.hpp"
#include "sessions/type_relations.hpp"
#include "sessions/types.hpp"

namespace oracle {

using sessions::CoverPair;
using sessions::Level;

// Order by reachability: a ⊑ b iff b is reachable from a along covers.
struct BruteLattice {
  std::vector<Level> levels;
  std::set<std::pair<Level, Level>> order;
  bool partial_order = true;
  bool lattice = true;
  std::map<std::pair<Level, Level>, Level> join, meet;

  bool leq(const Level& a, const Level& b) const { return order.contains({a, b}); }
};

inline BruteLattice brute_lattice(const std::vector<Level>& levels,
                                  const std::vector<CoverPair>& covers) {
  BruteLattice out;
  out.levels = levels;
  for (const auto& start : levels) {
    std::vector<Level> stack{start};
    std::set<Level> seen;
    while (!stack.empty()) {
      Level x = stack.back();
      stack.pop_back();
      if (!seen.insert(x).second) continue;
      out.order.insert({start, x});
      for (const auto& c : covers) {
        if (c.lower == x) stack.push_back(c.upper);
      }
    }
  }
  for (const auto& a : levels) {
    for (const auto& b : levels) {
      if (a != b && out.leq(a, b) && out.leq(b, a)) out.partial_order = false;
    }
  }
  if (!out.partial_order) {
    out.lattice = false;
    return out;
  }
  for (const auto& a : levels) {
    for (const auto& b : levels) {
      std::vector<Level> uppers, lowers;
      for (const auto& c : levels) {
        if (out.leq(a, c) && out.leq(b, c)) uppers.push_back(c);
        if (out.leq(c, a) && out.leq(c, b)) lowers.push_back(c);
      }
      std::optional<Level> lub, glb;
      for (const auto& u : uppers) {
        if (std::all_of(uppers.begin(), uppers.end(), [&](const Level& v) { return out.leq(u, v); })) lub = u;
      }
      for (const auto& l : lowers) {
        if (std::all_of(lowers.begin(), lowers.end(), [&](const Level& v) { return out.leq(v, l); })) glb = l;
      }
      if (!lub || !glb) {
        out.lattice = false;
        continue;
      }
      out.join[{a, b}] = *lub;
      out.meet[{a, b}] = *glb;
    }
  }
  return out;
}

struct LatticeSpec {
  std::string name;
  std::vector<Level> levels;
  std::vector<CoverPair> covers;
};

// Every lattice shape with at most six elements that the tests enumerate.
inline std::vector<LatticeSpec> lattice_corpus() {
  std::vector<LatticeSpec> out;
  for (int n = 1; n <= 6; ++n) {
    LatticeSpec chain{"chain" + std::to_string(n), {}, {}};
    for (int i = 0; i < n; ++i) chain.levels.push_back("c" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) chain.covers.push_back({chain.levels[i], chain.levels[i + 1]});
    out.push_back(chain);
  }
  out.push_back({"diamond", {"bot", "a", "b", "top"}, {{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}}});
  out.push_back({"m3",
                 {"bot", "a", "b", "c", "top"},
                 {{"bot", "a"}, {"bot", "b"}, {"bot", "c"}, {"a", "top"}, {"b", "top"}, {"c", "top"}}});
  out.push_back({"n5",
                 {"bot", "a", "b", "c", "top"},
                 {{"bot", "a"}, {"a", "b"}, {"b", "top"}, {"bot", "c"}, {"c", "top"}}});
  out.push_back({"two-by-three",
                 {"00", "01", "02", "10", "11", "12"},
                 {{"00", "01"}, {"01", "02"}, {"10", "11"}, {"11", "12"}, {"00", "10"}, {"01", "11"}, {"02", "12"}}});
  out.push_back({"diamond-on-chain",
                 {"z", "bot", "a", "b", "top", "up"},
                 {{"z", "bot"}, {"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}, {"top", "up"}}});
  out.push_back({"m4",
                 {"bot", "a", "b", "c", "d", "top"},
                 {{"bot", "a"}, {"bot", "b"}, {"bot", "c"}, {"bot", "d"},
                  {"a", "top"}, {"b", "top"}, {"c", "top"}, {"d", "top"}}});
  // Redundant covers must not change the order.
  out.push_back({"chain3-transitive", {"x", "y", "z"}, {{"x", "y"}, {"y", "z"}, {"x", "z"}}});
  return out;
}

// A congruence-class key computed by string manipulation: choices of one
// kind flatten into a sorted multiset of their summands' keys.
inline std::string congruence_key(const sessions::Process& p);

inline void choice_keys(const sessions::Process& p, bool internal, std::vector<std::string>& out) {
  const auto& v = p.node().v;
  if (internal) {
    if (const auto* c = std::get_if<sessions::InternalChoiceProc>(&v)) {
      choice_keys(c->left, true, out);
      choice_keys(c->right, true, out);
      return;
    }
  } else if (const auto* c = std::get_if<sessions::ExternalChoiceProc>(&v)) {
    choice_keys(c->left, false, out);
    choice_keys(c->right, false, out);
    return;
  }
  out.push_back(congruence_key(p));
}

inline std::string congruence_key(const sessions::Process& p) {
  using namespace sessions;
  const auto& v = p.node().v;
  if (std::holds_alternative<InternalChoiceProc>(v) || std::holds_alternative<ExternalChoiceProc>(v)) {
    bool internal = std::holds_alternative<InternalChoiceProc>(v);
    std::vector<std::string> keys;
    choice_keys(p, internal, keys);
    std::sort(keys.begin(), keys.end());
    std::string out = internal ? "[(+)" : "[+";
    for (const auto& k : keys) out += " " + k;
    return out + "]";
  }
  if (const auto* o = std::get_if<OutputProc>(&v)) {
    return o->to + "!" + o->label + "(" + to_string(o->payload) + ")." + congruence_key(o->next);
  }
  if (const auto* i = std::get_if<InputProc>(&v)) {
    std::string ann = i->annotation ? ":" + to_string(*i->annotation) : "";
    return i->from + "?" + i->label + "(" + i->var + ann + ")." + congruence_key(i->next);
  }
  if (const auto* r = std::get_if<RecProc>(&v)) {
    std::string ann = r->annotation ? ":" + to_string(*r->annotation) : "";
    return "rec " + r->var + ann + "." + congruence_key(r->body);
  }
  if (const auto* x = std::get_if<VarProc>(&v)) return x->name;
  return "0";
}

// Rewrites p with random applications of the choice rules: commutation and
// reassociation, preserving the congruence class.
inline sessions::Process shuffle_congruent(sessions::Rng& rng, const sessions::Process& p) {
  using namespace sessions;
  const auto& v = p.node().v;
  if (std::holds_alternative<InternalChoiceProc>(v) || std::holds_alternative<ExternalChoiceProc>(v)) {
    bool internal = std::holds_alternative<InternalChoiceProc>(v);
    std::vector<Process> parts;
    std::vector<Process> stack{p};
    while (!stack.empty()) {
      Process q = stack.back();
      stack.pop_back();
      const auto& qv = q.node().v;
      if (internal) {
        if (const auto* c = std::get_if<InternalChoiceProc>(&qv)) {
          stack.push_back(c->left);
          stack.push_back(c->right);
          continue;
        }
      } else if (const auto* c = std::get_if<ExternalChoiceProc>(&qv)) {
        stack.push_back(c->left);
        stack.push_back(c->right);
        continue;
      }
      parts.push_back(shuffle_congruent(rng, q));
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    // Random bracketing.
    while (parts.size() > 1) {
      std::size_t i = std::uniform_int_distribution<std::size_t>(0, parts.size() - 2)(rng);
      Process joined = internal ? Process::internal_choice(parts[i], parts[i + 1])
                                : Process::external_choice(parts[i], parts[i + 1]);
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i), parts.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(i), joined);
    }
    return parts.front();
  }
  if (const auto* o = std::get_if<OutputProc>(&v)) {
    return Process::output(o->to, o->label, o->payload, shuffle_congruent(rng, o->next));
  }
  if (const auto* i = std::get_if<InputProc>(&v)) {
    return Process::input(i->from, i->label, i->var, i->annotation, shuffle_congruent(rng, i->next));
  }
  if (const auto* r = std::get_if<RecProc>(&v)) {
    return Process::rec(r->var, shuffle_congruent(rng, r->body), r->annotation);
  }
  return p;
}

// T ≤ T′ approximated to `depth` unfoldings, by direct recursion on trees.
// Types are interned so the memo is keyed by small integers.
class SubtypeApprox {
 public:
  bool run(const sessions::SessionType& a, const sessions::SessionType& b, int depth) {
    return run_ids(intern(a), intern(b), depth);
  }

 private:
  int intern(const sessions::SessionType& t) {
    auto [it, fresh] = ids_.emplace(t, static_cast<int>(heads_.size()));
    if (fresh) heads_.push_back(sessions::unfold_head(t));
    return it->second;
  }

  bool run_ids(int a, int b, int depth) {
    using namespace sessions;
    if (depth == 0) return true;
    auto key = std::make_tuple(a, b, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    SessionType ha = heads_[static_cast<std::size_t>(a)];
    SessionType hb = heads_[static_cast<std::size_t>(b)];
    bool result = false;
    if (ha.is_end() && hb.is_end()) {
      result = true;
    } else if (ha.is_in() && hb.is_in()) {
      const auto& ia = std::get<InType>(ha.node().v);
      const auto& ib = std::get<InType>(hb.node().v);
      result = ia.peer == ib.peer;
      for (const auto& br : ib.branches) {
        if (!result) break;
        auto it = std::find_if(ia.branches.begin(), ia.branches.end(),
                               [&](const TypeBranch& x) { return x.label == br.label; });
        result = it != ia.branches.end() && it->sort == br.sort &&
                 run_ids(intern(it->next), intern(br.next), depth - 1);
      }
    } else if (ha.is_out() && hb.is_out()) {
      const auto& oa = std::get<OutType>(ha.node().v);
      const auto& ob = std::get<OutType>(hb.node().v);
      result = oa.peer == ob.peer;
      for (const auto& br : oa.branches) {
        if (!result) break;
        auto it = std::find_if(ob.branches.begin(), ob.branches.end(),
                               [&](const TypeBranch& x) { return x.label == br.label; });
        result = it != ob.branches.end() && it->sort == br.sort &&
                 run_ids(intern(br.next), intern(it->next), depth - 1);
      }
    }
    memo_.emplace(key, result);
    return result;
  }

  std::map<sessions::SessionType, int> ids_;
  std::vector<sessions::SessionType> heads_;
  std::map<std::tuple<int, int, int>, bool> memo_;
};

// A supertype of t: inputs lose branches, outputs gain a fresh one.
inline sessions::SessionType widen(sessions::Rng& rng, const sessions::SessionType& t,
                                    const sessions::SecurityContext& sec) {
  using namespace sessions;
  const auto& v = t.node().v;
  if (const auto* r = std::get_if<RecType>(&v)) return SessionType::rec(r->var, widen(rng, r->body, sec));
  if (const auto* o = std::get_if<OutType>(&v)) {
    std::vector<TypeBranch> bs;
    for (const auto& b : o->branches) bs.push_back({b.label, b.sort, widen(rng, b.next, sec)});
    if (rng() % 2 == 0) {
      std::string fresh = "w" + std::to_string(rng() % 1000);
      if (std::none_of(bs.begin(), bs.end(), [&](const TypeBranch& b) { return b.label == fresh; })) {
        bs.push_back({fresh, AnnotatedSort{Sort::Bool, sec.lattice.bottom(), sec.topics.topics()[0]}, SessionType::end()});
      }
    }
    return SessionType::out(o->peer, bs);
  }
  if (const auto* i = std::get_if<InType>(&v)) {
    std::vector<TypeBranch> bs;
    for (const auto& b : i->branches) {
      if (bs.empty() || rng() % 3 != 0) bs.push_back({b.label, b.sort, widen(rng, b.next, sec)});
    }
    return SessionType::in(i->peer, bs);
  }
  return t;
}

// Projection commutes with every residual of g: participants outside the
// step keep an equivalent type, and the movers' λ-continuations are
// subtypes of their new projections. Returns the first failure; `checked`
// counts residual steps examined. Non-projectable g is skipped.
inline std::optional<std::string> projection_commutes(const sessions::GlobalType& g,
                                                      const std::vector<sessions::Participant>& ps,
                                                      std::size_t& checked) {
  using namespace sessions;
  std::map<Participant, SessionType> before;
  try {
    for (const auto& p : ps) before[p] = project(g, p);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const auto& step : reduce_global(g)) {
    std::string where = to_string(g) + " after " + step.from + " " + step.label + " " + step.to;
    std::map<Participant, SessionType> after;
    try {
      for (const auto& p : ps) after[p] = project(step.residual, p);
    } catch (const Error& e) {
      return "residual not projectable: " + where;
    }
    for (const auto& r : ps) {
      if (r == step.from || r == step.to) continue;
      if (!equivalent(before[r], after[r])) return "projection of " + r + " changed: " + where;
    }
    auto continuation = [&](const Participant& who, bool sender) -> std::optional<SessionType> {
      SessionType head = unfold_head(before[who]);
      const auto& v = head.node().v;
      const std::vector<TypeBranch>* bs = nullptr;
      if (sender) {
        if (const auto* o = std::get_if<OutType>(&v); o && o->peer == step.to) bs = &o->branches;
      } else if (const auto* in = std::get_if<InType>(&v); in && in->peer == step.from) {
        bs = &in->branches;
      }
      if (bs == nullptr) return std::nullopt;
      for (const auto& b : *bs) {
        if (b.label == step.label) return b.next;
      }
      return std::nullopt;
    };
    auto sent = continuation(step.from, true);
    auto received = continuation(step.to, false);
    if (!sent || !received) return "mover does not offer the step: " + where;
    if (!subtype(*sent, after[step.from])) return "sender continuation too large: " + where;
    if (!subtype(*received, after[step.to])) return "receiver continuation too large: " + where;
    ++checked;
  }
  return std::nullopt;
}

}  // namespace oracle
