#include <gtest/gtest.h>

#include <algorithm>

#include "wadge/flowchart.hpp"
#include "wadge/generate.hpp"

using namespace wadge;

namespace {

const Space k2{2};
ClopenSet S(const char* text) { return parse_set(text, k2); }
UpPoint P(const char* text) { return parse_point(text, k2); }

Term running_term() { return parse_term(R"(q"q0" ~> join(q"q1", q"q2"))"); }

Flowchart running(Family at_join = {S("{10}"), S("{11}")}, ClopenSet at_root = S("{1}")) {
  return Flowchart(running_term(), k2, {{{}, {at_root}}, {{1}, std::move(at_join)}});
}

Outcome value(const char* q) { return {EvalStatus::Value, q}; }

// Bullet recursion written out directly, independent of the library walk.
bool reaches(const Flowchart& f, const UpPoint& x, const Address& target) {
  Address at;
  for (std::size_t i : target) {
    const NodeLabel& lab = f.tree().label(at);
    if (lab.kind == TermKind::Arrow && (member(x, f.test(at)) ? 1u : 0u) != i) return false;
    if (lab.kind == TermKind::Join && !member(x, f.family(at)[i])) return false;
    at.push_back(i);
  }
  return true;
}

}  // namespace

TEST(Flowchart, Validation) {
  EXPECT_THROW(Flowchart(running_term(), k2, {{{}, {S("{1}")}}}), Error);
  EXPECT_THROW(Flowchart(running_term(), k2, {{{}, {S("{1}"), S("{0}")}}, {{1}, {S("{1}"), S("{0}")}}}), Error);
  EXPECT_THROW(Flowchart(running_term(), k2, {{{}, {S("{1}")}}, {{1}, {S("{1}")}}}), Error);
  EXPECT_THROW(Flowchart(running_term(), k2, {{{}, {S("{1}")}}, {{1}, {S("{1}"), S("{0}")}}, {{0}, {S("{1}")}}}), Error);
  EXPECT_THROW(Flowchart(parse_term(R"(x"v" ~> join(q"a"))"), k2, {{{}, {S("{1}")}}, {{1}, {S("{1}")}}}), Error);
  EXPECT_THROW(running({S("{10}"), parse_set("{2}", Space{3})}), Error);
  EXPECT_THROW(Flowchart(running_term(), k2, running().assign(), Alphabet{"q0"}), Error);
}

TEST(Flowchart, DomainAssignment) {
  const auto d = domain_assignment(running());
  EXPECT_TRUE(d.at({}).is_full());
  EXPECT_TRUE(equals(d.at({0}), S("{0}")));
  EXPECT_TRUE(equals(d.at({1}), S("{1}")));
  EXPECT_TRUE(equals(d.at({1, 0}), S("{10}")));
  EXPECT_TRUE(equals(d.at({1, 1}), S("{11}")));
  const Flowchart v(parse_term(R"(veb[1](q"a") ~> join(q"b"))"), k2, {{{}, {S("{1}")}}, {{1}, {S("{e}")}}});
  const auto dv = domain_assignment(v);
  EXPECT_TRUE(equals(dv.at({0, 0}), dv.at({0})));
}

TEST(Flowchart, TruePathsAndEval) {
  const Flowchart f = running();
  EXPECT_EQ(true_paths(f, P("(0)")), (std::vector<TruePath>{{{0}, "q0"}}));
  EXPECT_EQ(true_paths(f, P("1(0)")), (std::vector<TruePath>{{{1, 0}, "q1"}}));
  EXPECT_EQ(eval(f, P("11(0)")), value("q2"));
  EXPECT_EQ(eval(f, P("(0)")), value("q0"));
  const Flowchart everything = running({S("{e}"), S("{e}")}, S("{e}"));
  EXPECT_EQ(true_paths(everything, P("01(1)")).size(), 2u);
  EXPECT_EQ(eval(everything, P("01(1)")).status, EvalStatus::AmbiguousLabels);
  EXPECT_EQ(eval(running({S("{}"), S("{}")}), P("1(0)")).status, EvalStatus::NoTruePath);
  const Flowchart same(parse_term(R"(q"a" ~> join(q"b", q"b"))"), k2, {{{}, {S("{e}")}}, {{1}, {S("{e}"), S("{e}")}}});
  EXPECT_EQ(eval(same, P("(1)")), value("b"));
  EXPECT_THROW(eval(f, parse_point("(2)", Space{3})), Error);
}

TEST(Flowchart, Totality) {
  EXPECT_TRUE(is_total(running()).holds);
  const Flowchart partial(parse_term(R"(q"q0" ~> join(q"q1"))"), k2, {{{}, {S("{1}")}}, {{1}, {S("{10}")}}});
  const Verdict v = is_total(partial);
  ASSERT_FALSE(v.holds);
  EXPECT_EQ(*v.witness, P("11(0)"));
  EXPECT_EQ(eval(partial, *v.witness).status, EvalStatus::NoTruePath);
  EXPECT_TRUE(is_total(Flowchart(parse_term(R"(veb[2](q"a"))"), k2, {})).holds);
}

TEST(Flowchart, TotalityIsSemanticNotLocal) {
  // The dead end under join argument 0 is masked by argument 1.
  const Flowchart f(parse_term(R"(join(join(q"a"), q"a"))"), k2,
                    {{{}, {S("{e}"), S("{e}")}}, {{0}, {S("{}")}}});
  EXPECT_TRUE(is_total(f).holds);
  const Verdict local = covers_domains(f);
  ASSERT_FALSE(local.holds);
  EXPECT_EQ(*local.at, (Address{0}));
  for (const auto& x : point_grid(k2, 3, 2)) EXPECT_EQ(eval(f, x), value("a"));
}

TEST(Flowchart, Determinism) {
  EXPECT_TRUE(is_deterministic(running()).holds);
  const Flowchart clash = running({S("{1}"), S("{1}")});
  const Verdict v = is_deterministic(clash);
  ASSERT_FALSE(v.holds);
  EXPECT_EQ(*v.witness, P("1(0)"));
  const Flowchart dup(parse_term(R"(q"a" ~> join(q"b", q"b"))"), k2, {{{}, {S("{1}")}}, {{1}, {S("{1}"), S("{1}")}}});
  EXPECT_TRUE(is_deterministic(dup).holds);
}

TEST(Flowchart, Monotone) {
  const Flowchart f = running();
  EXPECT_EQ(to_monotone(f).assign(), f.assign());
  const Flowchart wide = running({S("{10, 00}"), S("{11}")});
  const Flowchart m = to_monotone(wide);
  EXPECT_TRUE(equals(m.family({1})[0], S("{10}")));
  for (const auto& x : point_grid(k2, 3, 2)) EXPECT_EQ(eval(m, x), eval(wide, x));
  const Flowchart bad(parse_term(R"(q"a" ~> q"b")"), k2, {{{}, {S("{1}")}}});
  try {
    to_monotone(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonNormal);
  }
}

TEST(Flowchart, Reduced) {
  const Flowchart f = running();
  EXPECT_EQ(to_reduced(f).assign(), f.assign());
  const Flowchart g(parse_term(R"(join(q"a", q"b"))"), k2, {{{}, {S("{0, 10}"), S("{1}")}}});
  const Flowchart r = to_reduced(g);
  EXPECT_TRUE(equals(r.family({})[0], S("{0, 10}")));
  EXPECT_TRUE(equals(r.family({})[1], S("{11}")));
  EXPECT_TRUE(is_reduced(r).holds);
  EXPECT_FALSE(is_reduced(g).holds);
  // a point in both members is sent past the branch where it would die
  const Flowchart dead_end(parse_term(R"(join(join(q"a"), q"b"))"), k2,
                           {{{}, {S("{e}"), S("{1}")}}, {{0}, {S("{0}")}}});
  ASSERT_TRUE(is_deterministic(dead_end).holds);
  const Flowchart rd = to_reduced(dead_end);
  EXPECT_TRUE(equals(rd.family({})[0], S("{0}")));
  EXPECT_TRUE(equals(rd.family({})[1], S("{1}")));
  for (const auto& x : point_grid(k2, 3, 2)) EXPECT_EQ(eval(rd, x), eval(dead_end, x));
  // a level-2 member keeps its level
  const Flowchart h(parse_term(R"(veb[0](join(q"a", q"b")))"), k2, {{{0}, {S("{0}@2"), S("{1}")}}});
  EXPECT_EQ(to_reduced(h).family({0})[0].level(), CnfOrdinal(2));
}

TEST(Flowchart, Pullback) {
  const Flowchart f = running();
  EXPECT_EQ(pullback(f, ContinuousMap::identity(k2)).assign(), f.assign());
  const auto dbl = ContinuousMap::doubling(k2);
  const Flowchart g = pullback(f, dbl);
  EXPECT_TRUE(equals(g.test({}), S("{1}")));
  const auto drop = ContinuousMap::drop_first(k2);
  const Flowchart h1 = pullback(pullback(f, dbl), drop);
  const Flowchart h2 = pullback(f, ContinuousMap::compose({drop, dbl}));
  for (const auto& x : point_grid(k2, 4, 2)) {
    EXPECT_EQ(eval(g, x), eval(f, apply(dbl, x)));
    EXPECT_EQ(eval(h1, x), eval(h2, x));
  }
}

TEST(Flowchart, VaughtTransform) {
  const Flowchart names(parse_term(R"(q"a" ~> join(q"b"))"), k2, {{{}, {S("{01}")}}, {{1}, {S("{01}")}}});
  EXPECT_EQ(vaught_transform(names, ContinuousMap::identity(k2), 6).assign(), names.assign());
  const Flowchart v = vaught_transform(names, ContinuousMap::drop_first(k2), 6);
  EXPECT_TRUE(equals(v.test({}), S("{1}")));
  const Flowchart wide = running({S("{e}"), S("{11}")});
  try {
    vaught_transform(wide, ContinuousMap::identity(k2), 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonMonotone);
  }
}

TEST(Flowchart, VaughtDeterminesTheSameFunction) {
  // pull a flowchart back along delta, so its eval is constant on fibers
  gen::Rng rng(9);
  const auto delta = ContinuousMap::drop_first(k2);
  gen::TermShape shape;
  for (int i = 0; i < 40; ++i) {
    const Term t = gen::normal_term(rng, shape);
    const Flowchart g = gen::total_deterministic_flowchart(rng, t, k2, 3);
    const Flowchart f = to_monotone(pullback(g, delta));
    const Flowchart v = vaught_transform(f, delta, 8);
    for (const auto& p : point_grid(k2, 4, 2)) ASSERT_EQ(eval(v, apply(delta, p)), eval(f, p));
  }
}

TEST(Flowchart, CheckLevels) {
  EXPECT_TRUE(check_levels(running()));
  const Term arrow_under_veblen = parse_term(R"(veb[0](q"a" ~> join(q"b")))");
  EXPECT_FALSE(check_levels(Flowchart(arrow_under_veblen, k2, {{{0}, {S("{1}@3")}}, {{0, 1}, {S("{e}")}}})));
  EXPECT_TRUE(check_levels(Flowchart(arrow_under_veblen, k2, {{{0}, {S("{1}@2")}}, {{0, 1}, {S("{e}")}}})));
}

TEST(Flowchart, DomainsMatchTheRecursion) {
  gen::Rng rng(77);
  gen::TermShape shape;
  const auto grid = point_grid(k2, 4, 2);
  for (int i = 0; i < 150; ++i) {
    const Flowchart f = gen::flowchart(rng, gen::normal_term(rng, shape), k2, 3);
    const auto d = domain_assignment(f);
    for (const auto& x : grid) {
      const auto tr = trace(f, x);
      for (const auto& [addr, dom] : d) {
        const bool in_trace = std::find(tr.begin(), tr.end(), addr) != tr.end();
        ASSERT_EQ(in_trace, member(x, dom));
        ASSERT_EQ(reaches(f, x, addr), member(x, dom));
      }
      EXPECT_EQ(true_paths(f, x), true_paths_via_domains(f, d, x));
    }
  }
}

TEST(Flowchart, MonotoneAndReducedProperties) {
  gen::Rng rng(78);
  gen::TermShape shape;
  const auto grid = point_grid(k2, 4, 2);
  for (int i = 0; i < 150; ++i) {
    const Flowchart f = gen::flowchart(rng, gen::normal_term(rng, shape), k2, 3);
    const Flowchart m = to_monotone(f);
    EXPECT_TRUE(is_monotone(m).holds);
    EXPECT_EQ(to_monotone(m).assign(), m.assign());
    EXPECT_EQ(check_levels(m), check_levels(f));
    const Flowchart r = to_reduced(f);
    EXPECT_TRUE(is_reduced(r).holds);
    for (const auto& x : grid) ASSERT_EQ(eval(m, x), eval(f, x));
  }
}
