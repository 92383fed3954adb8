#include "sessions/type_relations.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "overloaded.hpp"
#include "sessions/syntax.hpp"
#include "type_graph.hpp"

namespace sessions {

using detail::TypeGraph;

namespace {

const TypeGraph::Branch* find_branch(const TypeGraph::Node& node, const Label& label) {
  for (const auto& b : node.branches) {
    if (b.label == label) return &b;
  }
  return nullptr;
}

class SubtypeSearch {
 public:
  SubtypeSearch(const TypeGraph& left, const TypeGraph& right) : left_(left), right_(right) {}

  bool run(std::size_t i, std::size_t j) {
    if (!visited_.insert({i, j}).second) return true;
    const auto& a = left_.node(i);
    const auto& b = right_.node(j);
    if (a.kind != b.kind) return false;
    if (a.kind == TypeGraph::Kind::End) return true;
    if (a.peer != b.peer) return false;
    // sub-in: every branch on the right must exist on the left.
    // sub-out: every branch on the left must exist on the right.
    const auto& required = a.kind == TypeGraph::Kind::In ? b : a;
    const auto& offered = a.kind == TypeGraph::Kind::In ? a : b;
    for (const auto& r : required.branches) {
      const auto* o = find_branch(offered, r.label);
      if (o == nullptr || o->sort != r.sort) return false;
      bool ok = a.kind == TypeGraph::Kind::In ? run(o->target, r.target) : run(r.target, o->target);
      if (!ok) return false;
    }
    return true;
  }

  std::size_t visited() const { return visited_.size(); }

 private:
  const TypeGraph& left_;
  const TypeGraph& right_;
  std::set<std::pair<std::size_t, std::size_t>> visited_;
};

class SecurityChecker {
 public:
  SecurityChecker(const TypeGraph& graph, const SecurityContext* security, const Lattice& lattice,
                  const TopicUniverse& topics)
      : graph_(graph), security_(security), lattice_(lattice), topics_(topics) {}

  bool agrees(const Level& level, const Topic& topic, std::size_t root) {
    auto key = std::make_tuple(level, topic, root);
    if (auto it = agree_memo_.find(key); it != agree_memo_.end()) {
      agree_reason_ = it->second.second;
      return it->second.first;
    }
    std::set<std::size_t> seen;
    std::vector<std::size_t> stack{root};
    std::string reason;
    while (reason.empty() && !stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      if (!seen.insert(i).second) continue;
      const auto& node = graph_.node(i);
      for (const auto& b : node.branches) {
        if (node.kind == TypeGraph::Kind::Out && !lattice_.leq(level, b.sort.level) &&
            !topics_.independent(topic, b.sort.topic)) {
          reason = "output " + node.peer + "!" + b.label + "(" + to_string(b.sort) +
                   ") lowers " + level + " on topic " + b.sort.topic + " related to " + topic;
          break;
        }
        stack.push_back(b.target);
      }
    }
    agree_visited_ = std::max(agree_visited_, seen.size());
    agree_memo_.emplace(key, std::make_pair(reason.empty(), reason));
    agree_reason_ = reason;
    return reason.empty();
  }

  bool safe(std::size_t i) {
    if (!safe_visited_.insert(i).second) return true;
    const auto& node = graph_.node(i);
    for (const auto& b : node.branches) {
      std::string what = node.peer + (node.kind == TypeGraph::Kind::Out ? "!" : "?") + b.label +
                         "(" + to_string(b.sort) + ")";
      if (node.kind == TypeGraph::Kind::Out) {
        const auto& bound = security_->policy.reading_level(node.peer, b.sort.topic);
        if (!lattice_.leq(b.sort.level, bound)) {
          reason_ = "safe-out fails at " + what + ": level " + b.sort.level +
                    " exceeds reading level " + bound + " of " + node.peer + " on " + b.sort.topic;
          return false;
        }
      } else if (!agrees(b.sort.level, b.sort.topic, b.target)) {
        reason_ = "safe-in fails at " + what + ": continuation does not agree with (" +
                  b.sort.level + "," + b.sort.topic + "): " + agree_reason_;
        return false;
      }
      if (!safe(b.target)) return false;
    }
    return true;
  }

  const std::string& reason() const { return reason_; }
  const std::string& agree_reason() const { return agree_reason_; }

  std::size_t visited() const { return std::max(safe_visited_.size(), agree_visited_); }

 private:
  const TypeGraph& graph_;
  const SecurityContext* security_;
  const Lattice& lattice_;
  const TopicUniverse& topics_;
  std::map<std::tuple<Level, Topic, std::size_t>, std::pair<bool, std::string>> agree_memo_;
  std::string agree_reason_;
  std::string reason_;
  std::set<std::size_t> safe_visited_;
  std::size_t agree_visited_ = 0;
};

}  // namespace

std::size_t closure_size(const SessionType& type) { return TypeGraph(type).size(); }

bool subtype(const SessionType& sub, const SessionType& super, CoinductionStats* stats) {
  TypeGraph left(sub);
  TypeGraph right(super);
  SubtypeSearch search(left, right);
  bool result = search.run(left.root(), right.root());
  if (stats != nullptr) *stats = {search.visited(), left.size() * right.size()};
  return result;
}

bool equivalent(const SessionType& a, const SessionType& b) {
  return subtype(a, b) && subtype(b, a);
}

bool agrees(const Level& level, const Topic& topic, const SessionType& type,
            const Lattice& lattice, const TopicUniverse& topics, CoinductionStats* stats) {
  TypeGraph graph(type);
  SecurityChecker checker(graph, nullptr, lattice, topics);
  bool result = checker.agrees(level, topic, graph.root());
  if (stats != nullptr) *stats = {checker.visited(), graph.size()};
  return result;
}

bool safe_type(const SessionType& type, const SecurityContext& security, CoinductionStats* stats) {
  TypeGraph graph(type);
  SecurityChecker checker(graph, &security, security.lattice, security.topics);
  bool result = checker.safe(graph.root());
  if (stats != nullptr) *stats = {checker.visited(), graph.size()};
  return result;
}

std::optional<std::string> unsafe_reason(const SessionType& type, const SecurityContext& security) {
  TypeGraph graph(type);
  SecurityChecker checker(graph, &security, security.lattice, security.topics);
  if (checker.safe(graph.root())) return std::nullopt;
  return checker.reason();
}

std::vector<SessionType> reduce_type(const SessionType& type) {
  SessionType head = unfold_head(type);
  std::vector<SessionType> out;
  std::visit(detail::overloaded{
                 [&](const OutType& o) {
                   std::size_t n = o.branches.size();
                   if (n == 1) {
                     out.push_back(o.branches.front().next);
                     return;
                   }
                   // T ∨ T′ ⇒ T for every split of the union.
                   for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
                     std::vector<TypeBranch> part;
                     for (std::size_t k = 0; k < n; ++k) {
                       if (mask & (std::size_t{1} << k)) part.push_back(o.branches[k]);
                     }
                     out.push_back(SessionType::out(o.peer, std::move(part)));
                   }
                 },
                 [&](const InType& i) {
                   for (const auto& b : i.branches) out.push_back(b.next);
                 },
                 [](const auto&) {},
             },
             head.node().v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SessionType> reduce_type_closure(const SessionType& type, std::size_t limit) {
  std::set<SessionType> seen{type};
  std::deque<SessionType> queue{type};
  while (!queue.empty() && seen.size() < limit) {
    SessionType t = queue.front();
    queue.pop_front();
    for (auto& next : reduce_type(t)) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace sessions
