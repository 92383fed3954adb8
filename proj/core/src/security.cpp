#include "sessions/security.hpp"

#include <algorithm>
#include <optional>

#include "sessions/error.hpp"

namespace sessions {

namespace {

std::optional<std::size_t> least_bound(const std::vector<char>& order, std::size_t n,
                                       std::size_t a, std::size_t b, bool upper) {
  auto le = [&](std::size_t x, std::size_t y) {
    return upper ? order[x * n + y] != 0 : order[y * n + x] != 0;
  };
  std::vector<std::size_t> bounds;
  for (std::size_t u = 0; u < n; ++u) {
    if (le(a, u) && le(b, u)) bounds.push_back(u);
  }
  for (std::size_t u : bounds) {
    if (std::all_of(bounds.begin(), bounds.end(), [&](std::size_t v) { return le(u, v); })) {
      return u;
    }
  }
  return std::nullopt;
}

}  // namespace

Lattice Lattice::validate(std::vector<Level> levels, std::span<const CoverPair> covers) {
  if (levels.empty()) throw Error(ErrorKind::NotALattice, "a lattice needs at least one level");

  Lattice lattice;
  const std::size_t n = levels.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!lattice.index_.emplace(levels[i], i).second) {
      throw Error(ErrorKind::DuplicateDefinition, "level '" + levels[i] + "' declared twice");
    }
  }
  lattice.names_ = std::move(levels);

  auto& order = lattice.order_;
  order.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) order[i * n + i] = 1;
  for (const auto& cover : covers) {
    order[lattice.index(cover.lower) * n + lattice.index(cover.upper)] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!order[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (order[k * n + j]) order[i * n + j] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (order[i * n + j] && order[j * n + i]) {
        throw Error(ErrorKind::NotAPartialOrder, "levels '" + lattice.names_[i] + "' and '" +
                                                     lattice.names_[j] + "' lie on a cycle");
      }
    }
  }

  lattice.join_.assign(n * n, 0);
  lattice.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto join = least_bound(order, n, a, b, true);
      auto meet = least_bound(order, n, a, b, false);
      if (!join || !meet) {
        throw Error(ErrorKind::NotALattice, std::string("levels '") + lattice.names_[a] +
                                                "' and '" + lattice.names_[b] + "' have no " +
                                                (join ? "meet" : "join"));
      }
      lattice.join_[a * n + b] = *join;
      lattice.meet_[a * n + b] = *meet;
    }
  }

  std::size_t bottom = 0;
  std::size_t top = 0;
  for (std::size_t i = 1; i < n; ++i) {
    bottom = lattice.meet_[bottom * n + i];
    top = lattice.join_[top * n + i];
  }
  lattice.bottom_ = bottom;
  lattice.top_ = top;
  return lattice;
}

std::size_t Lattice::index(std::string_view level) const {
  auto it = index_.find(level);
  if (it == index_.end()) {
    throw Error(ErrorKind::UnknownLevel, "unknown level '" + std::string(level) + "'");
  }
  return it->second;
}

bool Lattice::contains(std::string_view level) const { return index_.contains(level); }

bool Lattice::leq(std::string_view a, std::string_view b) const {
  return order_[index(a) * size() + index(b)] != 0;
}

const Level& Lattice::join(std::string_view a, std::string_view b) const {
  return names_[join_[index(a) * size() + index(b)]];
}

const Level& Lattice::meet(std::string_view a, std::string_view b) const {
  return names_[meet_[index(a) * size() + index(b)]];
}

TopicUniverse::TopicUniverse(std::vector<Topic> topics,
                             const std::vector<std::pair<Topic, Topic>>& independent_pairs)
    : topics_(std::move(topics)) {
  for (const auto& topic : topics_) {
    if (!known_.insert(topic).second) {
      throw Error(ErrorKind::DuplicateDefinition, "topic '" + topic + "' declared twice");
    }
  }
  for (const auto& [a, b] : independent_pairs) {
    require(a);
    require(b);
    if (a == b) {
      throw Error(ErrorKind::ReflexiveIndependence,
                  "topic '" + a + "' cannot be independent of itself");
    }
    indep_.insert(std::minmax(a, b));
  }
}

void TopicUniverse::require(std::string_view topic) const {
  if (!known_.contains(topic)) {
    throw Error(ErrorKind::UnknownTopic, "unknown topic '" + std::string(topic) + "'");
  }
}

bool TopicUniverse::contains(std::string_view topic) const { return known_.contains(topic); }

bool TopicUniverse::independent(std::string_view a, std::string_view b) const {
  require(a);
  require(b);
  if (a == b) return false;
  auto key = a < b ? std::pair<Topic, Topic>(a, b) : std::pair<Topic, Topic>(b, a);
  return indep_.contains(key);
}

TopicUniverse TopicUniverse::with_independence(const Topic& a, const Topic& b) const {
  std::vector<std::pair<Topic, Topic>> pairs(indep_.begin(), indep_.end());
  pairs.emplace_back(a, b);
  return TopicUniverse(topics_, pairs);
}

ReadingPolicy::ReadingPolicy(const Lattice& lattice, const TopicUniverse& topics,
                             Entries entries, Level fallback)
    : entries_(std::move(entries)), fallback_(std::move(fallback)) {
  if (!lattice.contains(fallback_)) {
    throw Error(ErrorKind::UnknownLevel, "unknown default reading level '" + fallback_ + "'");
  }
  for (const auto& [key, level] : entries_) {
    if (!topics.contains(key.second)) {
      throw Error(ErrorKind::UnknownTopic, "unknown topic '" + key.second + "' in reading policy");
    }
    if (!lattice.contains(level)) {
      throw Error(ErrorKind::UnknownLevel, "unknown level '" + level + "' in reading policy");
    }
  }
  topics_.insert(topics.topics().begin(), topics.topics().end());
}

ReadingPolicy::ReadingPolicy(const Lattice& lattice, const TopicUniverse& topics, Entries entries)
    : ReadingPolicy(lattice, topics, std::move(entries), lattice.bottom()) {}

const Level& ReadingPolicy::reading_level(std::string_view participant,
                                          std::string_view topic) const {
  if (!topics_.contains(topic)) {
    throw Error(ErrorKind::UnknownTopic, "unknown topic '" + std::string(topic) + "'");
  }
  auto it = entries_.find(std::pair<Participant, Topic>(participant, topic));
  return it == entries_.end() ? fallback_ : it->second;
}

}  // namespace sessions
