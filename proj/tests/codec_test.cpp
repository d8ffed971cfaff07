#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "wadge/codec.hpp"
#include "wadge/generate.hpp"

using namespace wadge;

namespace {

const Space k2{2};

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(WADGE_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

const char* kRunning = R"js({"space": 2, "term": "q\"q0\" ~> join(q\"q1\", q\"q2\")", "assign": %s})js";

std::string running_with(const std::string& assign) {
  std::string s = kRunning;
  s.replace(s.find("%s"), 2, assign);
  return s;
}

}  // namespace

TEST(Codec, TreeRoundTrip) {
  const Term t = parse_term(R"(veb[w + 1](q"a" ~> join(x"v", q"b")))");
  const Json j = encode_tree(syntax_tree(t));
  EXPECT_EQ(j["nodes"][0]["kind"], "veblen");
  EXPECT_EQ(j["nodes"][0]["payload"], "w + 1");
  EXPECT_EQ(term_from_tree(decode_tree(j)), t);
}

TEST(Codec, TreeAcceptsNumericKinds) {
  const Json j = parse_json(R"({"nodes": [{"addr": [], "kind": 3, "payload": null}, {"addr": [0], "kind": 0, "payload": "a"}]})");
  EXPECT_EQ(term_from_tree(decode_tree(j)), Term::join({Term::constant("a")}));
}

TEST(Codec, TreeErrors) {
  EXPECT_EQ(kind_of([] { decode_tree(parse_json(R"({"nodes": [{"addr": [], "kind": 7, "payload": "a"}]})")); }),
            ErrorKind::UnknownKind);
  EXPECT_EQ(kind_of([] { decode_tree(parse_json(R"({"nodes": [{"addr": [], "kind": "wat"}]})")); }), ErrorKind::UnknownKind);
  EXPECT_EQ(kind_of([] { decode_tree(parse_json(R"({"nodes": {}})")); }), ErrorKind::Malformed);
  EXPECT_THROW(decode_tree(parse_json(R"({"nodes": [{"addr": [0], "kind": "const", "payload": "a"}]})")), Error);
  EXPECT_EQ(kind_of([] { parse_json("{"); }), ErrorKind::Malformed);
}

TEST(Codec, MapNames) {
  for (const char* name : {"identity", "drop-first", "double", "in{0, 11}", "in-inverse{0, 11}", "out{01}"}) {
    const ContinuousMap f = decode_map(Json(name), k2);
    EXPECT_EQ(encode_map(f), Json(name));
  }
  EXPECT_EQ(kind_of([] { decode_map(Json("teleport"), k2); }), ErrorKind::UnknownKind);
  const ContinuousMap c = decode_map(parse_json(R"(["double", "drop-first"])"), k2);
  EXPECT_EQ(c.kind(), MapKind::Composite);
  EXPECT_EQ(decode_map(encode_map(c), k2), c);
}

TEST(Codec, TransducerMaps) {
  const Json j = parse_json(slurp("merge.tr"));
  const ContinuousMap f = decode_map(j, k2);
  EXPECT_EQ(apply(f, parse_point("(01)", k2)), parse_point("(0)", k2));
  EXPECT_EQ(decode_map(encode_map(f), k2), f);
  EXPECT_EQ(kind_of([] {
              decode_map(parse_json(R"({"states": 1, "init": 0, "trans": [{"from": 0, "in": 0, "to": 0, "out": "0"}]})"), k2);
            }),
            ErrorKind::Malformed);
}

TEST(Codec, FlowchartFixture) {
  const Flowchart f = decode_flowchart(parse_json(slurp("running.fc")));
  EXPECT_EQ(eval(f, parse_point("11(0)", k2)), (Outcome{EvalStatus::Value, "q2"}));
  EXPECT_TRUE(f.alphabet().has_value());
  EXPECT_EQ(decode_flowchart(encode_flowchart(f)), f);
}

TEST(Codec, FlowchartErrors) {
  EXPECT_EQ(kind_of([] { decode_flowchart(parse_json(running_with(R"({"": "{1}"})"))); }), ErrorKind::Arity);
  EXPECT_EQ(kind_of([] { decode_flowchart(parse_json(running_with(R"({"": ["{1}"], "1": ["{10}", "{11}"]})"))); }),
            ErrorKind::Arity);
  EXPECT_EQ(kind_of([] { decode_flowchart(parse_json(running_with(R"({"": "{1}", "1": ["{10}", "{11}"], "0": "{1}"})"))); }),
            ErrorKind::Arity);
  EXPECT_EQ(kind_of([] { decode_flowchart(parse_json(running_with(R"({"": "{1}", "1": ["{10}", "{11}"], "5": "{1}"})"))); }),
            ErrorKind::InvalidAddress);
  EXPECT_EQ(kind_of([] { decode_flowchart(parse_json(running_with(R"({"": "{1}@2", "1": ["{10}", "{11}"]})"))); }),
            ErrorKind::LevelViolation);
  EXPECT_THROW(decode_flowchart(parse_json(running_with(R"({"": "{2}", "1": ["{10}", "{11}"]})"))), Error);
  EXPECT_EQ(kind_of([] {
              decode_flowchart(parse_json(R"({"space": 2, "alphabet": ["a"], "term": "q\"b\"", "assign": {}})"));
            }),
            ErrorKind::UnknownConstant);
  EXPECT_EQ(kind_of([] { decode_flowchart(parse_json(R"({"space": 2, "term": "x\"v\"", "assign": {}})")); }),
            ErrorKind::OpenTerm);
}

TEST(Codec, CommandFixture) {
  const Command c = decode_command(parse_json(slurp("running.cmd")));
  EXPECT_TRUE(is_simple(c));
  EXPECT_EQ(decode_command(encode_command(c)), c);
  const Command bare = decode_command(parse_json(running_with(R"({"": {"U": "{1}"}, "1": {"U": ["{10}", "{11}"]}})")));
  EXPECT_EQ(bare, c);
}

TEST(Codec, CommandErrors) {
  EXPECT_EQ(kind_of([] {
              decode_command(parse_json(
                  running_with(R"({"": {"U": "{1}", "u": ["double", "identity"]}, "1": {"U": ["{10}", "{11}"]}})")));
            }),
            ErrorKind::Malformed);
  EXPECT_EQ(kind_of([] { decode_command(parse_json(running_with(R"({"": {"U": "{1}"}})"))); }), ErrorKind::Arity);
  EXPECT_EQ(kind_of([] {
              decode_command(parse_json(running_with(R"({"": {"U": "{1}"}, "1": {"U": ["{10}", "{11}"]}, "1.0": {}})")));
            }),
            ErrorKind::Arity);
  EXPECT_EQ(kind_of([] {
              decode_command(parse_json(running_with(R"({"": {"U": "{1}"}, "1": {"U": ["{10}", "{11}"]}, "7": {}})")));
            }),
            ErrorKind::InvalidAddress);
}

TEST(Codec, RandomRoundTrips) {
  gen::Rng rng(404);
  gen::TermShape shape;
  shape.max_depth = 5;
  for (int i = 0; i < 300; ++i) {
    const Term t = gen::normal_term(rng, shape);
    const Flowchart f = gen::flowchart(rng, t, k2, 4);
    ASSERT_EQ(decode_flowchart(parse_json(encode_flowchart(f).dump())), f);
    const Command c = gen::command(rng, t, k2, 3);
    ASSERT_EQ(decode_command(parse_json(encode_command(c).dump())), c);
  }
}
