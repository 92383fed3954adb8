#include "type_graph.hpp"

#include <map>
#include <optional>
#include <string>

#include "overloaded.hpp"
#include "sessions/error.hpp"

namespace sessions::detail {

namespace {

struct Slot {
  TypeGraph::Node node;
  std::optional<std::size_t> alias;  // set for μ binders
  bool pending_alias = false;
};

class Builder {
 public:
  std::size_t build(const SessionType& type, std::map<std::string, std::size_t>& env) {
    return std::visit(
        overloaded{
            [&](const OutType& o) { return branch_node(TypeGraph::Kind::Out, o.peer, o.branches, env); },
            [&](const InType& i) { return branch_node(TypeGraph::Kind::In, i.peer, i.branches, env); },
            [&](const RecType& r) {
              std::size_t slot = slots.size();
              slots.push_back(Slot{{}, std::nullopt, true});
              auto saved = env.find(r.var) == env.end() ? std::optional<std::size_t>()
                                                        : std::optional<std::size_t>(env[r.var]);
              env[r.var] = slot;
              std::size_t body = build(r.body, env);
              if (saved) {
                env[r.var] = *saved;
              } else {
                env.erase(r.var);
              }
              slots[slot].alias = body;
              return slot;
            },
            [&](const VarType& v) -> std::size_t {
              auto it = env.find(v.name);
              if (it == env.end()) {
                throw Error(ErrorKind::FreeTypeVariable, "free type variable '" + v.name + "'");
              }
              return it->second;
            },
            [&](const EndType&) {
              slots.push_back(Slot{});
              return slots.size() - 1;
            },
        },
        type.node().v);
  }

  std::vector<Slot> slots;

 private:
  std::size_t branch_node(TypeGraph::Kind kind, const Participant& peer,
                          const std::vector<TypeBranch>& branches,
                          std::map<std::string, std::size_t>& env) {
    TypeGraph::Node node{kind, peer, {}};
    for (const auto& b : branches) node.branches.push_back({b.label, b.sort, build(b.next, env)});
    slots.push_back(Slot{std::move(node), std::nullopt, false});
    return slots.size() - 1;
  }
};

}  // namespace

TypeGraph::TypeGraph(const SessionType& type) {
  Builder builder;
  std::map<std::string, std::size_t> env;
  std::size_t root = builder.build(type, env);
  auto& slots = builder.slots;

  auto resolve = [&](std::size_t index) {
    for (std::size_t hops = 0; slots[index].pending_alias; ++hops) {
      if (hops > slots.size()) throw Error(ErrorKind::Unguarded, "type has unguarded recursion");
      index = *slots[index].alias;
    }
    return index;
  };

  std::vector<std::size_t> renumber(slots.size(), 0);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].pending_alias) {
      renumber[i] = nodes_.size();
      nodes_.push_back(slots[i].node);
    }
  }
  for (auto& node : nodes_) {
    for (auto& branch : node.branches) branch.target = renumber[resolve(branch.target)];
  }
  root_ = renumber[resolve(root)];
}

}  // namespace sessions::detail
