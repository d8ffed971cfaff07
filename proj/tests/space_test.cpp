#include <gtest/gtest.h>

#include <set>

#include "wadge/generate.hpp"
#include "wadge/space.hpp"

using namespace wadge;

namespace {

const Space k2{2};
ClopenSet S(const char* text, Space s = k2) { return parse_set(text, s); }
UpPoint P(const char* text, Space s = k2) { return parse_point(text, s); }

// Membership by comparing against the first n letters of the point.
bool member_slow(const UpPoint& x, const ClopenSet& a) {
  for (const auto& w : a.antichain())
    if (x.take(w.size()) == w) return true;
  return false;
}

}  // namespace

TEST(Point, Canonical) {
  EXPECT_EQ(P("0101(01)"), P("(01)"));
  EXPECT_EQ(P("1(0101)"), P("1(01)"));
  EXPECT_EQ(render_point(P("0(10)")), "(01)");
  EXPECT_EQ(render_point(P("01(1)")), "0(1)");
  EXPECT_EQ(P("(0)").at(100), 0u);
  EXPECT_THROW(P("01"), SyntaxError);
  EXPECT_THROW(P("0()"), Error);
  EXPECT_THROW(P("2(0)"), Error);
}

TEST(Point, GridIsCanonicalAndComplete) {
  const auto g = point_grid(k2, 4, 2);
  // shortest prefix <= 4 with primitive period of length 1 or 2:
  // 16 points per period, periods 0, 1, 01, 10
  EXPECT_EQ(g.size(), 64u);
  std::set<std::string> seen;
  for (const auto& x : g) EXPECT_TRUE(seen.insert(render_point(x)).second);
  // every raw (prefix, period) pair lands in the grid
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t bits = 0; bits < (1u << n); ++bits) {
      Word pre;
      for (std::size_t i = 0; i < n; ++i) pre.push_back((bits >> i) & 1);
      for (const Word& per : {Word{0}, Word{1}, Word{0, 1}, Word{1, 0}, Word{0, 0}})
        EXPECT_TRUE(seen.count(render_point(UpPoint(k2, pre, per))));
    }
}

TEST(Clopen, Membership) {
  EXPECT_TRUE(member(P("01(10)"), ClopenSet::full(k2)));
  EXPECT_FALSE(member(P("0(01)"), S("{01}")));
  EXPECT_TRUE(member(P("01(0)"), S("{01}")));
}

TEST(Clopen, BooleanExamples) {
  EXPECT_TRUE(set_union(S("{0}"), S("{1}")).is_full());
  EXPECT_EQ(render_set(set_union(S("{0}"), S("{1}"))), "{e}");
  EXPECT_TRUE(equals(complement(S("{1}")), S("{0}")));
  EXPECT_TRUE(equals(difference(S("{0, 11}"), S("{0}")), S("{11}")));
  EXPECT_TRUE(S("{}").is_empty());
  EXPECT_THROW(set_union(S("{0}"), S("{0}", Space{3})), Error);
}

TEST(Clopen, CanonicalAntichain) {
  EXPECT_EQ(S("{00, 01, 1}").antichain(), (std::vector<Word>{Word{}}));
  EXPECT_EQ(S("{0, 01, 011}").antichain(), (std::vector<Word>{Word{0}}));
  EXPECT_EQ(S("{11, 0}").antichain(), (std::vector<Word>{Word{0}, Word{1, 1}}));
}

TEST(Clopen, Levels) {
  EXPECT_EQ(complement(S("{1}")).level(), CnfOrdinal(2));
  EXPECT_EQ(set_union(S("{1}@3"), S("{0}")).level(), CnfOrdinal(3));
  EXPECT_EQ(render_set(S("{1}@w + 1")), "{1}@w + 1");
  EXPECT_THROW(S("{1}@0"), Error);
}

TEST(Clopen, EnumerateCylinders) {
  EXPECT_EQ(enumerate_cylinders(ClopenSet::full(k2)), (std::vector<Word>{Word{}}));
  EXPECT_EQ(enumerate_cylinders(S("{0, 11}")), (std::vector<Word>{Word{0}, Word{1, 1}}));
  EXPECT_TRUE(enumerate_cylinders(S("{}")).empty());
}

TEST(Clopen, LeastPoint) {
  EXPECT_EQ(least_point(S("{11, 10}")), P("1(0)"));
  EXPECT_EQ(least_point(S("{011}")), P("011(0)"));
  EXPECT_THROW(least_point(S("{}")), Error);
}

TEST(Clopen, ParseRender) {
  for (const char* s : {"{}", "{e}", "{0, 11}", "{01, 1}@2"}) EXPECT_EQ(render_set(S(s)), s);
  EXPECT_EQ(render_set(S("{<12>, 3}", Space{13})), "{3, <12>}");
  EXPECT_THROW(S("{2}"), Error);
  EXPECT_THROW(S("{0"), SyntaxError);
}

TEST(Clopen, BooleanAlgebraLawsHoldExactlyAndPointwise) {
  for (std::uint32_t k : {2u, 3u}) {
    const Space s{k};
    const auto grid = point_grid(s, 4, 2);
    gen::Rng rng(k * 101);
    for (int i = 0; i < 150; ++i) {
      const ClopenSet a = gen::varied_clopen(rng, s, 4), b = gen::varied_clopen(rng, s, 4), c = gen::varied_clopen(rng, s, 4);
      EXPECT_TRUE(equals(complement(set_union(a, b)), intersect(complement(a), complement(b))));
      EXPECT_TRUE(equals(complement(intersect(a, b)), set_union(complement(a), complement(b))));
      EXPECT_TRUE(equals(intersect(a, set_union(b, c)), set_union(intersect(a, b), intersect(a, c))));
      EXPECT_TRUE(equals(set_union(a, intersect(b, c)), intersect(set_union(a, b), set_union(a, c))));
      EXPECT_TRUE(equals(complement(complement(a)), a));
      EXPECT_EQ(is_subset(a, b), difference(a, b).is_empty());
      for (const auto& x : grid) {
        const bool ia = member_slow(x, a), ib = member_slow(x, b);
        ASSERT_EQ(member(x, a), ia);
        ASSERT_EQ(member(x, set_union(a, b)), ia || ib);
        ASSERT_EQ(member(x, intersect(a, b)), ia && ib);
        ASSERT_EQ(member(x, complement(a)), !ia);
        ASSERT_EQ(member(x, difference(a, b)), ia && !ib);
      }
    }
  }
}
