#include <gtest/gtest.h>

#include <bit>
#include <functional>

#include "oracles.hpp"
#include "sessions/error.hpp"
#include "sessions/security.hpp"

using namespace sessions;

namespace {

Lattice chain3() {
  std::vector<CoverPair> covers{{"bot", "mid"}, {"mid", "top"}};
  return Lattice::validate({"bot", "mid", "top"}, covers);
}

Lattice diamond() {
  std::vector<CoverPair> covers{{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}};
  return Lattice::validate({"bot", "a", "b", "top"}, covers);
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Lattice, ChainHasBottomAndTop) {
  Lattice l = chain3();
  EXPECT_EQ(l.bottom(), "bot");
  EXPECT_EQ(l.top(), "top");
  EXPECT_TRUE(l.leq("bot", "top"));
  EXPECT_FALSE(l.leq("top", "mid"));
  EXPECT_EQ(l.join("mid", "bot"), "mid");
  EXPECT_EQ(l.meet("mid", "top"), "mid");
}

TEST(Lattice, Diamond) {
  Lattice l = diamond();
  EXPECT_EQ(l.join("a", "b"), "top");
  EXPECT_EQ(l.meet("a", "b"), "bot");
  EXPECT_FALSE(l.leq("a", "b"));
  EXPECT_FALSE(l.leq("b", "a"));
}

TEST(Lattice, AntichainIsNotALattice) {
  EXPECT_EQ(error_of([] { Lattice::validate({"a", "b"}, {}); }), ErrorKind::NotALattice);
}

TEST(Lattice, CycleIsNotAPartialOrder) {
  std::vector<CoverPair> covers{{"a", "b"}, {"b", "a"}};
  EXPECT_EQ(error_of([&] { Lattice::validate({"a", "b"}, covers); }), ErrorKind::NotAPartialOrder);
}

TEST(Lattice, TwoMaximalElementsIsNotALattice) {
  std::vector<CoverPair> covers{{"bot", "a"}, {"bot", "b"}};
  EXPECT_EQ(error_of([&] { Lattice::validate({"bot", "a", "b"}, covers); }), ErrorKind::NotALattice);
}

TEST(Lattice, RejectsUnknownAndDuplicateLevels) {
  std::vector<CoverPair> covers{{"bot", "nope"}};
  EXPECT_EQ(error_of([&] { Lattice::validate({"bot"}, covers); }), ErrorKind::UnknownLevel);
  EXPECT_EQ(error_of([] { Lattice::validate({"bot", "bot"}, {}); }), ErrorKind::DuplicateDefinition);
  EXPECT_EQ(error_of([] { Lattice::validate({}, {}); }), ErrorKind::NotALattice);
  Lattice l = chain3();
  EXPECT_EQ(error_of([&] { (void)l.leq("bot", "nope"); }), ErrorKind::UnknownLevel);
  EXPECT_EQ(error_of([&] { (void)l.join("nope", "bot"); }), ErrorKind::UnknownLevel);
}

TEST(Lattice, SingletonIsALattice) {
  Lattice l = Lattice::validate({"only"}, {});
  EXPECT_EQ(l.bottom(), "only");
  EXPECT_EQ(l.top(), "only");
}

// Laws by enumeration over every pair and triple of every corpus lattice.
TEST(Lattice, LawsOnCorpus) {
  for (const auto& entry : oracle::lattice_corpus()) {
    SCOPED_TRACE(entry.name);
    Lattice l = Lattice::validate(entry.levels, entry.covers);
    const auto& ls = l.levels();
    for (const auto& a : ls) {
      EXPECT_EQ(l.join(a, a), a);
      EXPECT_EQ(l.meet(a, a), a);
      EXPECT_EQ(l.join(a, l.bottom()), a);
      EXPECT_TRUE(l.leq(l.bottom(), a));
      EXPECT_TRUE(l.leq(a, l.top()));
      for (const auto& b : ls) {
        EXPECT_EQ(l.join(a, b), l.join(b, a));
        EXPECT_EQ(l.meet(a, b), l.meet(b, a));
        EXPECT_EQ(l.join(a, l.meet(a, b)), a);
        EXPECT_EQ(l.meet(a, l.join(a, b)), a);
        EXPECT_EQ(l.leq(a, b), l.join(a, b) == b);
        EXPECT_EQ(l.leq(a, b), l.meet(a, b) == a);
        EXPECT_TRUE(a == b || !(l.leq(a, b) && l.leq(b, a)));
        for (const auto& c : ls) {
          EXPECT_EQ(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
          EXPECT_EQ(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
          EXPECT_TRUE(!(l.leq(a, b) && l.leq(b, c)) || l.leq(a, c));
        }
      }
    }
  }
}

TEST(Lattice, CorpusAgreesWithBruteForce) {
  for (const auto& entry : oracle::lattice_corpus()) {
    SCOPED_TRACE(entry.name);
    Lattice l = Lattice::validate(entry.levels, entry.covers);
    auto ref = oracle::brute_lattice(entry.levels, entry.covers);
    ASSERT_TRUE(ref.lattice);
    for (const auto& a : entry.levels) {
      for (const auto& b : entry.levels) {
        EXPECT_EQ(l.leq(a, b), ref.leq(a, b));
        EXPECT_EQ(l.join(a, b), (ref.join.at({a, b})));
        EXPECT_EQ(l.meet(a, b), (ref.meet.at({a, b})));
      }
    }
  }
}

// Every cover relation on four elements: the validator accepts exactly the
// lattices and classifies the failures like the brute-force oracle.
TEST(Lattice, AllRelationsOnFourElements) {
  std::vector<Level> levels{"a", "b", "c", "d"};
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) slots.emplace_back(i, j);
    }
  }
  int accepted = 0;
  for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
    std::vector<CoverPair> covers;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (mask & (1u << k)) covers.push_back({levels[slots[k].first], levels[slots[k].second]});
    }
    auto ref = oracle::brute_lattice(levels, covers);
    try {
      Lattice l = Lattice::validate(levels, covers);
      ASSERT_TRUE(ref.lattice) << "mask " << mask;
      ++accepted;
      for (const auto& x : levels) {
        for (const auto& y : levels) {
          ASSERT_EQ(l.leq(x, y), ref.leq(x, y));
          ASSERT_EQ(l.join(x, y), (ref.join.at({x, y})));
          ASSERT_EQ(l.meet(x, y), (ref.meet.at({x, y})));
        }
      }
    } catch (const Error& e) {
      ASSERT_FALSE(ref.lattice) << "mask " << mask;
      ASSERT_EQ(e.kind(), ref.partial_order ? ErrorKind::NotALattice : ErrorKind::NotAPartialOrder)
          << "mask " << mask;
    }
  }
  // 4-element lattices are chains (24 labellings) or diamonds (12 labellings)
  // up to redundant covers, so many masks are accepted.
  EXPECT_GT(accepted, 36);
}

TEST(Topics, IndependenceExamples) {
  TopicUniverse u({"phi", "psi"}, {{"phi", "psi"}});
  EXPECT_TRUE(u.independent("phi", "psi"));
  EXPECT_TRUE(u.independent("psi", "phi"));
  EXPECT_FALSE(u.independent("phi", "phi"));
  EXPECT_TRUE(u.related("phi", "phi"));
  TopicUniverse none({"phi", "psi"}, {});
  EXPECT_FALSE(none.independent("phi", "psi"));
  EXPECT_TRUE(none.related("phi", "psi"));
}

TEST(Topics, Errors) {
  EXPECT_EQ(error_of([] { TopicUniverse({"phi"}, {{"phi", "phi"}}); }),
            ErrorKind::ReflexiveIndependence);
  EXPECT_EQ(error_of([] { TopicUniverse({"phi"}, {{"phi", "psi"}}); }), ErrorKind::UnknownTopic);
  TopicUniverse u({"phi"}, {});
  EXPECT_EQ(error_of([&] { (void)u.independent("phi", "chi"); }), ErrorKind::UnknownTopic);
}

// Every independence relation on three topics, given in either orientation.
TEST(Topics, IrreflexiveAndSymmetricExhaustively) {
  std::vector<Topic> topics{"t0", "t1", "t2"};
  std::vector<std::pair<Topic, Topic>> pairs{{"t0", "t1"}, {"t0", "t2"}, {"t1", "t2"}};
  for (unsigned mask = 0; mask < 8; ++mask) {
    for (unsigned flip = 0; flip < 8; ++flip) {
      std::vector<std::pair<Topic, Topic>> given;
      for (unsigned k = 0; k < 3; ++k) {
        if (!(mask & (1u << k))) continue;
        auto p = pairs[k];
        if (flip & (1u << k)) std::swap(p.first, p.second);
        given.push_back(p);
      }
      TopicUniverse u(topics, given);
      for (unsigned k = 0; k < 3; ++k) {
        bool expected = mask & (1u << k);
        EXPECT_EQ(u.independent(pairs[k].first, pairs[k].second), expected);
        EXPECT_EQ(u.independent(pairs[k].second, pairs[k].first), expected);
      }
      for (const auto& t : topics) EXPECT_FALSE(u.independent(t, t));
      EXPECT_EQ(u.independent_pairs().size(), static_cast<std::size_t>(std::popcount(mask)));
    }
  }
}

TEST(Topics, IndependenceIsNotTransitive) {
  TopicUniverse u({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  EXPECT_TRUE(u.independent("a", "b"));
  EXPECT_TRUE(u.independent("b", "c"));
  EXPECT_FALSE(u.independent("a", "c"));
  auto extended = u.with_independence("a", "c");
  EXPECT_TRUE(extended.independent("c", "a"));
}

TEST(ReadingPolicy, ProgramCommitteeLevels) {
  Lattice l = chain3();
  TopicUniverse u({"phi", "psi"}, {{"phi", "psi"}});
  ReadingPolicy pol(l, u,
                    {{{"p0", "phi"}, "top"}, {{"p0", "psi"}, "top"}, {{"p1", "phi"}, "mid"},
                     {{"p1", "psi"}, "bot"}, {{"p2", "phi"}, "bot"}, {{"p2", "psi"}, "bot"}});
  EXPECT_EQ(pol.reading_level("p0", "phi"), "top");
  EXPECT_EQ(pol.reading_level("p2", "phi"), "bot");
  EXPECT_EQ(pol.reading_level("p1", "phi"), "mid");
}

TEST(ReadingPolicy, DefaultsAndErrors) {
  Lattice l = chain3();
  TopicUniverse u({"phi", "psi"}, {});
  ReadingPolicy pol(l, u, {});
  EXPECT_EQ(pol.reading_level("p9", "psi"), "bot");
  ReadingPolicy generous(l, u, {}, "top");
  EXPECT_EQ(generous.reading_level("p9", "psi"), "top");
  EXPECT_EQ(error_of([&] { (void)pol.reading_level("p9", "chi"); }), ErrorKind::UnknownTopic);
  EXPECT_EQ(error_of([&] { ReadingPolicy(l, u, {{{"p", "phi"}, "huge"}}); }), ErrorKind::UnknownLevel);
  EXPECT_EQ(error_of([&] { ReadingPolicy(l, u, {}, "huge"); }), ErrorKind::UnknownLevel);
  EXPECT_EQ(error_of([&] { ReadingPolicy(l, u, {{{"p", "chi"}, "bot"}}); }), ErrorKind::UnknownTopic);
}

TEST(ReadingPolicy, TotalOverUniverse) {
  Lattice l = diamond();
  TopicUniverse u({"phi", "psi", "chi"}, {});
  ReadingPolicy pol(l, u, {{{"p", "phi"}, "a"}});
  for (const auto& who : {"p", "q"}) {
    for (const auto& t : u.topics()) EXPECT_TRUE(l.contains(pol.reading_level(who, t)));
  }
}
