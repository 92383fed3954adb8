#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sessions {

using Level = std::string;
using Topic = std::string;
using Participant = std::string;
using Label = std::string;

// One edge of the user-supplied order: `lower` is directly below `upper`.
struct CoverPair {
  Level lower;
  Level upper;
};

// A finite security lattice. The order is the reflexive-transitive closure
// of the cover pairs it was validated from; joins, meets, bottom and top are
// precomputed. Immutable after construction.
class Lattice {
 public:
  // Closes `covers` and checks the result is a lattice. Throws
  // NotAPartialOrder on a cycle, NotALattice when some pair of levels lacks a
  // unique join or meet (or `levels` is empty), UnknownLevel for a cover that
  // names an undeclared level, DuplicateDefinition for a repeated level.
  static Lattice validate(std::vector<Level> levels, std::span<const CoverPair> covers);

  bool contains(std::string_view level) const;
  bool leq(std::string_view a, std::string_view b) const;
  const Level& join(std::string_view a, std::string_view b) const;
  const Level& meet(std::string_view a, std::string_view b) const;
  const Level& bottom() const { return names_[bottom_]; }
  const Level& top() const { return names_[top_]; }

  const std::vector<Level>& levels() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  Lattice() = default;
  std::size_t index(std::string_view level) const;

  std::vector<Level> names_;
  std::map<Level, std::size_t, std::less<>> index_;
  std::vector<char> order_;  // row-major, order_[a * n + b] == a ⊑ b
  std::vector<std::size_t> join_;
  std::vector<std::size_t> meet_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
};

inline Lattice validate_lattice(std::vector<Level> levels, std::span<const CoverPair> covers) {
  return Lattice::validate(std::move(levels), covers);
}

// Topics together with an irreflexive, symmetric independence relation.
// Independence is stored as unordered pairs and is never closed
// transitively; "related" is its complement.
class TopicUniverse {
 public:
  TopicUniverse(std::vector<Topic> topics,
                const std::vector<std::pair<Topic, Topic>>& independent_pairs);

  bool contains(std::string_view topic) const;
  bool independent(std::string_view a, std::string_view b) const;
  bool related(std::string_view a, std::string_view b) const { return !independent(a, b); }

  const std::vector<Topic>& topics() const { return topics_; }
  // Each unordered pair once, smaller name first.
  const std::set<std::pair<Topic, Topic>>& independent_pairs() const { return indep_; }

  TopicUniverse with_independence(const Topic& a, const Topic& b) const;

 private:
  void require(std::string_view topic) const;

  std::vector<Topic> topics_;
  std::set<Topic, std::less<>> known_;
  std::set<std::pair<Topic, Topic>> indep_;
};

// Reading levels ρ(p, φ). Entries absent from the table resolve to
// `fallback`, which is ⊥ unless configured otherwise.
class ReadingPolicy {
 public:
  using Entries = std::map<std::pair<Participant, Topic>, Level>;

  ReadingPolicy(const Lattice& lattice, const TopicUniverse& topics, Entries entries,
                Level fallback);
  ReadingPolicy(const Lattice& lattice, const TopicUniverse& topics, Entries entries);

  const Level& reading_level(std::string_view participant, std::string_view topic) const;

  const Entries& entries() const { return entries_; }
  const Level& fallback() const { return fallback_; }

 private:
  Entries entries_;
  Level fallback_;
  std::set<Topic, std::less<>> topics_;
};

// Everything the oracle and the type system consult about security.
struct SecurityContext {
  Lattice lattice;
  TopicUniverse topics;
  ReadingPolicy policy;
};

}  // namespace sessions
