#include <gtest/gtest.h>

#include "wadge/continuous_map.hpp"
#include "wadge/generate.hpp"

using namespace wadge;

namespace {

const Space k2{2};
ClopenSet S(const char* text, Space s = k2) { return parse_set(text, s); }
UpPoint P(const char* text, Space s = k2) { return parse_point(text, s); }

ContinuousMap merge_to_zero() {
  return ContinuousMap::from_transducer(Transducer(k2, k2, 0, {{Edge{0, {0}}, Edge{0, {0}}}}));
}

// Maps whose images of clopen sets are clopen. A retraction is not one of
// them: it collapses each cylinder of its set onto a single point.
std::vector<ContinuousMap> open_maps(Space s) {
  return {ContinuousMap::identity(s),
          ContinuousMap::drop_first(s),
          ContinuousMap::in_map(S("{0, 11}", s)),
          ContinuousMap::in_inverse(S("{0, 11}", s)),
          ContinuousMap::compose({ContinuousMap::in_map(S("{10}", s)), ContinuousMap::drop_first(s)})};
}

}  // namespace

TEST(Transducer, RejectsSilentCycles) {
  EXPECT_THROW(Transducer(k2, k2, 0, {{Edge{0, {}}, Edge{0, {1}}}}), Error);
  EXPECT_THROW(Transducer(k2, k2, 0, {{Edge{1, {}}, Edge{0, {1}}}}), Error);
  EXPECT_THROW(Transducer(k2, k2, 0, {{Edge{0, {2}}, Edge{0, {1}}}}), Error);
  EXPECT_NO_THROW(Transducer(k2, k2, 0, {{Edge{1, {}}, Edge{1, {}}}, {Edge{1, {0}}, Edge{1, {1}}}}));
}

TEST(Maps, ApplyExamples) {
  const UpPoint x = P("01(10)");
  EXPECT_EQ(apply(ContinuousMap::identity(k2), x), x);
  EXPECT_EQ(apply(ContinuousMap::in_map(S("{0, 11}")), P("1(0)")), P("11(0)"));
  EXPECT_EQ(apply(ContinuousMap::doubling(k2), P("(01)")), P("(0011)"));
  EXPECT_EQ(apply(ContinuousMap::drop_first(k2), P("1(01)")), P("(01)"));
  EXPECT_THROW(apply(ContinuousMap::identity(Space{3}), x), Error);
}

TEST(Maps, InMapExamples) {
  const auto two = ContinuousMap::in_map(S("{0, 11}"));
  EXPECT_EQ(apply(two, P("0(1)")), P("0(1)"));
  EXPECT_EQ(apply(two, P("1(01)")), P("11(01)"));
  const auto all = ContinuousMap::in_map(ClopenSet::full(k2));
  EXPECT_EQ(apply(all, P("10(1)")), P("10(1)"));
  const auto one = ContinuousMap::in_map(S("{10}"));
  EXPECT_EQ(apply(one, P("(0)")), P("10(0)"));
  EXPECT_THROW(ContinuousMap::in_map(S("{}")), Error);
}

TEST(Maps, InMapUsesPrefixCodeForLargerFamilies) {
  // three cylinders 00, 011, 10: indices read as 0, 10, 11
  const auto m = ContinuousMap::in_map(S("{00, 10, 011}"));
  EXPECT_EQ(apply(m, P("0(1)")), P("00(1)"));
  EXPECT_EQ(apply(m, P("10(1)")), P("011(1)"));
  EXPECT_EQ(apply(m, P("11(0)")), P("10(0)"));
  // over three letters two cylinders admit no cylinder-wise homeomorphism
  EXPECT_THROW(ContinuousMap::in_map(S("{0, 1}", Space{3})), Error);
  EXPECT_NO_THROW(ContinuousMap::in_map(S("{0, 1, 20}", Space{3})));
}

TEST(Maps, OutMapExamples) {
  const auto r = ContinuousMap::out_map(S("{1}"));
  EXPECT_EQ(apply(r, P("0(1)")), P("0(1)"));
  EXPECT_EQ(apply(r, P("1(0)")), P("(0)"));
  const auto s = ContinuousMap::out_map(S("{01}"));
  EXPECT_EQ(apply(s, P("01(1)")), P("00(0)"));
  EXPECT_THROW(ContinuousMap::out_map(ClopenSet::full(k2)), Error);
}

TEST(Maps, PreimageExamples) {
  const ClopenSet a = S("{0, 11}");
  EXPECT_EQ(preimage(ContinuousMap::identity(k2), a), a);
  EXPECT_TRUE(preimage(ContinuousMap::in_map(a), a).is_full());
  EXPECT_TRUE(equals(preimage(ContinuousMap::doubling(k2), S("{00}")), S("{0}")));
  EXPECT_EQ(preimage(ContinuousMap::identity(k2), S("{1}@3")).level(), CnfOrdinal(3));
}

TEST(Maps, ImageExamples) {
  const ClopenSet a = S("{0, 11}");
  EXPECT_EQ(image(ContinuousMap::identity(k2), a, 6), a);
  EXPECT_TRUE(equals(image(ContinuousMap::in_map(a), ClopenSet::full(k2), 6), a));
  EXPECT_TRUE(equals(image(ContinuousMap::drop_first(k2), S("{01}"), 6), S("{1}")));
  try {
    image(merge_to_zero(), S("{1}"), 6);
    FAIL() << "a single point is not clopen";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Undecided);
  }
}

TEST(Maps, ComposeFlattensAndDropsIdentities) {
  const auto id = ContinuousMap::identity(k2);
  const auto d = ContinuousMap::doubling(k2);
  EXPECT_TRUE(ContinuousMap::compose({id, id}).is_identity());
  EXPECT_EQ(ContinuousMap::compose({id, d, id}), d);
  const auto c = ContinuousMap::compose({d, ContinuousMap::compose({ContinuousMap::drop_first(k2), d})});
  EXPECT_EQ(c.kind(), MapKind::Composite);
  EXPECT_EQ(c.parts().size(), 3u);
  const UpPoint x = P("1(01)");
  EXPECT_EQ(apply(c, x), apply(d, apply(ContinuousMap::drop_first(k2), apply(d, x))));
}

TEST(Maps, InMapIsInjectiveOntoItsSet) {
  gen::Rng rng(3);
  const auto grid = point_grid(k2, 4, 2);
  for (int i = 0; i < 60; ++i) {
    const ClopenSet v = gen::varied_clopen(rng, k2, 3);
    if (v.is_empty()) continue;
    const auto in = ContinuousMap::in_map(v);
    const auto back = ContinuousMap::in_inverse(v);
    std::set<std::string> seen;
    for (const auto& x : grid) {
      const UpPoint y = apply(in, x);
      ASSERT_TRUE(member(y, v)) << render_set(v) << " " << render_point(x);
      EXPECT_TRUE(seen.insert(render_point(y)).second);
      EXPECT_EQ(apply(back, y), x);
    }
    EXPECT_TRUE(preimage(in, v).is_full());
  }
}

TEST(Maps, OutMapIsARetraction) {
  gen::Rng rng(4);
  const auto grid = point_grid(k2, 4, 2);
  for (int i = 0; i < 60; ++i) {
    const ClopenSet v = gen::varied_clopen(rng, k2, 3);
    if (v.is_full()) continue;
    const auto r = ContinuousMap::out_map(v);
    for (const auto& x : grid) {
      const UpPoint y = apply(r, x);
      ASSERT_FALSE(member(y, v));
      EXPECT_EQ(apply(r, y), y);
      if (!member(x, v)) EXPECT_EQ(y, x);
    }
  }
}

TEST(Maps, PreimageIsExact) {
  gen::Rng rng(5);
  const auto grid = point_grid(k2, 4, 2);
  for (int i = 0; i < 80; ++i) {
    const ContinuousMap f = gen::map(rng, k2, 3);
    const ClopenSet a = gen::varied_clopen(rng, k2, 3);
    const ClopenSet pre = preimage(f, a);
    for (const auto& x : grid) ASSERT_EQ(member(x, pre), member(apply(f, x), a));
  }
}

TEST(Maps, ImageIsSoundAndComplete) {
  // image points are searched for among names with prefix <= 6, period <= 2
  const auto grid = point_grid(k2, 4, 2);
  const auto names = point_grid(k2, 6, 2);
  gen::Rng rng(6);
  for (const auto& f : open_maps(k2)) {
    for (int i = 0; i < 12; ++i) {
      const ClopenSet a = gen::varied_clopen(rng, k2, 3);
      const ClopenSet img = image(f, a, 8);
      for (const auto& x : names)
        if (member(x, a)) ASSERT_TRUE(member(apply(f, x), img));
      for (const auto& y : grid) {
        if (!member(y, img)) continue;
        bool found = false;
        for (const auto& x : names)
          if (member(x, a) && apply(f, x) == y) {
            found = true;
            break;
          }
        EXPECT_TRUE(found) << render_set(a) << " " << render_point(y);
      }
    }
  }
}
