#pragma once

#include <cstddef>
#include <vector>

#include "sessions/types.hpp"

namespace sessions::detail {

// A closed, guarded session type compiled to a finite graph: μ binders and
// variables disappear, each variable becoming an edge back to its binder.
// Nodes are the closure of the type under unfolding, so coinductive checks
// can memoize on node indices.
class TypeGraph {
 public:
  enum class Kind { Out, In, End };

  struct Branch {
    Label label;
    AnnotatedSort sort;
    std::size_t target;
  };

  struct Node {
    Kind kind = Kind::End;
    Participant peer;
    std::vector<Branch> branches;
  };

  explicit TypeGraph(const SessionType& type);

  std::size_t root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t index) const { return nodes_[index]; }

 private:
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

}  // namespace sessions::detail
