#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "sessions/security.hpp"
#include "sessions/syntax.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) {
  return std::string(SESSIONS_FIXTURES) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline sessions::Model load_fixture(const std::string& name) {
  return sessions::parse_model(read_fixture(name));
}

inline sessions::SecurityContext make_security(
    std::vector<sessions::Level> levels, std::vector<sessions::CoverPair> covers,
    std::vector<sessions::Topic> topics, std::vector<std::pair<sessions::Topic, sessions::Topic>> indep,
    sessions::ReadingPolicy::Entries reads = {}, std::optional<sessions::Level> fallback = std::nullopt) {
  auto lattice = sessions::Lattice::validate(std::move(levels), covers);
  sessions::TopicUniverse universe(std::move(topics), indep);
  sessions::ReadingPolicy policy = fallback ? sessions::ReadingPolicy(lattice, universe, std::move(reads), *fallback)
                                            : sessions::ReadingPolicy(lattice, universe, std::move(reads));
  return {lattice, universe, policy};
}

// bot < mid < top over phi, psi with the given independence and every
// reading level at top.
inline sessions::SecurityContext chain3(bool independent) {
  std::vector<std::pair<sessions::Topic, sessions::Topic>> indep;
  if (independent) indep.push_back({"phi", "psi"});
  return make_security({"bot", "mid", "top"}, {{"bot", "mid"}, {"mid", "top"}}, {"phi", "psi"}, indep, {},
                       "top");
}

}  // namespace testing_support
