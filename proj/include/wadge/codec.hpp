#ifndef WADGE_CODEC_HPP
#define WADGE_CODEC_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wadge/command.hpp"
#include "wadge/continuous_map.hpp"
#include "wadge/error.hpp"
#include "wadge/flowchart.hpp"
#include "wadge/space.hpp"
#include "wadge/term.hpp"

namespace wadge {

using Json = nlohmann::ordered_json;

// Document layouts:
//   tree       {"nodes": [{"addr": [..], "kind": "const|var|arrow|join|veblen", "payload": ..}]}
//   flowchart  {"space": k, "alphabet": [..]?, "term": DSL text or tree, "assign": {addr-key: set | [set, ..]}}
//   command    {"space": k, "alphabet": [..]?, "term": .., "assign": {addr-key: {"U": set | [set, ..], "u": [map, ..]}}}
//   map        "identity" | "drop-first" | "double" | "in{..}" | "in-inverse{..}" | "out{..}"
//              | {"in": k, "out": k, "states": n, "init": s, "trans": [{"from", "in", "to", "out"}]}
//              | [map, ..]   (composite, first element applied first)
// Address keys are dot-separated child indices, "" for the root.

inline std::string_view kind_tag(TermKind k) {
  switch (k) {
    case TermKind::Const: return "const";
    case TermKind::Var: return "var";
    case TermKind::Arrow: return "arrow";
    case TermKind::Join: return "join";
    case TermKind::Veblen: return "veblen";
  }
  return "?";
}

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorKind::Malformed, what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::string text_of(const Json& j, const char* what) {
  if (!j.is_string()) malformed(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline std::uint64_t natural_of(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    malformed(std::string(what) + " must be a natural number");
  return j.get<std::uint64_t>();
}

inline TermKind kind_of(const Json& j) {
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v >= 0 && v <= 4) return static_cast<TermKind>(v);
    throw Error(ErrorKind::UnknownKind, std::to_string(v));
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    for (TermKind k : {TermKind::Const, TermKind::Var, TermKind::Arrow, TermKind::Join, TermKind::Veblen})
      if (s == kind_tag(k)) return k;
    throw Error(ErrorKind::UnknownKind, quote(s));
  }
  throw Error(ErrorKind::UnknownKind, j.dump());
}

}  // namespace detail

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Malformed, e.what());
  }
}

// ---------------------------------------------------------------------------
// Syntax trees

inline Json encode_tree(const SyntaxTree& tree) {
  Json nodes = Json::array();
  for (const auto& [addr, lab] : tree.nodes()) {
    Json n;
    n["addr"] = addr;
    n["kind"] = kind_tag(lab.kind);
    switch (lab.kind) {
      case TermKind::Const:
      case TermKind::Var: n["payload"] = lab.name; break;
      case TermKind::Veblen: n["payload"] = render_ordinal(lab.index); break;
      default: n["payload"] = nullptr; break;
    }
    nodes.push_back(std::move(n));
  }
  return Json{{"nodes", std::move(nodes)}};
}

inline SyntaxTree decode_tree(const Json& doc) {
  const Json& nodes = detail::field(doc, "nodes");
  if (!nodes.is_array()) detail::malformed("\"nodes\" must be an array");
  SyntaxTree::Nodes out;
  for (const auto& n : nodes) {
    Address addr;
    const Json& a = detail::field(n, "addr");
    if (!a.is_array()) detail::malformed("\"addr\" must be an array");
    for (const auto& i : a) addr.push_back(detail::natural_of(i, "address entry"));
    NodeLabel lab{detail::kind_of(detail::field(n, "kind")), {}, CnfOrdinal(0)};
    const Json payload = n.contains("payload") ? n.at("payload") : Json();
    switch (lab.kind) {
      case TermKind::Const:
      case TermKind::Var: lab.name = detail::text_of(payload, "leaf payload"); break;
      case TermKind::Veblen: lab.index = parse_ordinal(detail::text_of(payload, "veblen payload")); break;
      default:
        if (!payload.is_null()) detail::malformed(std::string(kind_tag(lab.kind)) + " node takes no payload");
        break;
    }
    if (!out.emplace(std::move(addr), std::move(lab)).second) detail::malformed("duplicate address");
  }
  SyntaxTree tree(std::move(out));
  tree.validate();
  return tree;
}

inline Term decode_term(const Json& j, const Alphabet* declared) {
  Term t = j.is_string() ? parse_term(j.get<std::string>(), declared) : term_from_tree(decode_tree(j));
  if (declared && !j.is_string()) {
    for (const auto& c : constants(t))
      if (!declared->count(c)) throw Error(ErrorKind::UnknownConstant, detail::quote(c));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Continuous maps

inline Json encode_map(const ContinuousMap& f) {
  switch (f.kind()) {
    case MapKind::Identity: return "identity";
    case MapKind::DropFirst: return "drop-first";
    case MapKind::Double: return "double";
    case MapKind::In: return "in" + render_set(*f.target());
    case MapKind::InInverse: return "in-inverse" + render_set(*f.target());
    case MapKind::Out: return "out" + render_set(*f.target());
    case MapKind::Composite: {
      Json parts = Json::array();
      for (const auto& p : f.parts()) parts.push_back(encode_map(p));
      return parts;
    }
    case MapKind::Transducer: break;
  }
  const Transducer& t = f.machine();
  Json trans = Json::array();
  for (std::size_t s = 0; s < t.state_count(); ++s)
    for (Letter a = 0; a < t.input_space().k; ++a) {
      const Edge& e = t.edge(s, a);
      trans.push_back(Json{{"from", s}, {"in", a}, {"to", e.to}, {"out", render_word(e.out)}});
    }
  return Json{{"in", t.input_space().k},   {"out", t.output_space().k}, {"states", t.state_count()},
              {"init", t.init()},          {"trans", std::move(trans)}};
}

/// Resolves a map reference read on values in `from`.
inline ContinuousMap decode_map(const Json& j, Space from) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "identity") return ContinuousMap::identity(from);
    if (s == "drop-first") return ContinuousMap::drop_first(from);
    if (s == "double") return ContinuousMap::doubling(from);
    auto with_set = [&](std::string_view name) -> std::optional<ClopenSet> {
      if (s.size() > name.size() && s.compare(0, name.size(), name) == 0 && s[name.size()] == '{')
        return parse_set(std::string_view(s).substr(name.size()), from);
      return std::nullopt;
    };
    if (auto v = with_set("in-inverse")) return ContinuousMap::in_inverse(*v);
    if (auto v = with_set("in")) return ContinuousMap::in_map(*v);
    if (auto v = with_set("out")) return ContinuousMap::out_map(*v);
    throw Error(ErrorKind::UnknownKind, "map " + detail::quote(s));
  }
  if (j.is_array()) {
    if (j.empty()) detail::malformed("empty composite map");
    std::vector<ContinuousMap> parts;
    Space at = from;
    for (const auto& p : j) {
      parts.push_back(decode_map(p, at));
      at = parts.back().output_space();
    }
    return ContinuousMap::compose(parts);
  }
  if (!j.is_object()) detail::malformed("map reference must be a name, a transducer or a list");
  const Space in = j.contains("in") ? make_space(detail::natural_of(j.at("in"), "\"in\"")) : from;
  const Space out = j.contains("out") ? make_space(detail::natural_of(j.at("out"), "\"out\"")) : in;
  require_same_space(from, in, "transducer input");
  const std::size_t states = detail::natural_of(detail::field(j, "states"), "\"states\"");
  const std::size_t init = detail::natural_of(detail::field(j, "init"), "\"init\"");
  if (states == 0) detail::malformed("transducer has no states");
  std::vector<std::vector<std::optional<Edge>>> cells(states, std::vector<std::optional<Edge>>(in.k));
  const Json& trans = detail::field(j, "trans");
  if (!trans.is_array()) detail::malformed("\"trans\" must be an array");
  for (const auto& e : trans) {
    const std::size_t s = detail::natural_of(detail::field(e, "from"), "\"from\"");
    const std::size_t a = detail::natural_of(detail::field(e, "in"), "\"in\"");
    const std::size_t to = detail::natural_of(detail::field(e, "to"), "\"to\"");
    if (s >= states || a >= in.k) detail::malformed("transition out of range");
    if (cells[s][a]) detail::malformed("duplicate transition");
    detail::Cursor cur(detail::text_of(detail::field(e, "out"), "\"out\""));
    Word w = detail::read_word(cur);
    cur.expect_end();
    cells[s][a] = Edge{to, std::move(w)};
  }
  std::vector<std::vector<Edge>> table(states);
  for (std::size_t s = 0; s < states; ++s)
    for (Letter a = 0; a < in.k; ++a) {
      if (!cells[s][a]) detail::malformed("transducer is missing a transition");
      table[s].push_back(*cells[s][a]);
    }
  return ContinuousMap::from_transducer(Transducer(in, out, init, std::move(table)));
}

// ---------------------------------------------------------------------------
// Flowcharts and commands

namespace detail {

inline void encode_header(Json& doc, const Space& space, const std::optional<Alphabet>& alphabet, const Term& t) {
  doc["space"] = space.k;
  if (alphabet) doc["alphabet"] = *alphabet;
  doc["term"] = render_term(t);
}

struct Header {
  Space space;
  std::optional<Alphabet> alphabet;
  Term term;
};

inline Header decode_header(const Json& doc) {
  if (!doc.is_object()) malformed("document must be an object");
  const Space space = make_space(natural_of(field(doc, "space"), "\"space\""));
  std::optional<Alphabet> alphabet;
  if (doc.contains("alphabet")) {
    const Json& a = doc.at("alphabet");
    if (!a.is_array()) malformed("\"alphabet\" must be an array");
    alphabet.emplace();
    for (const auto& q : a) alphabet->insert(text_of(q, "alphabet entry"));
  }
  Term t = decode_term(field(doc, "term"), alphabet ? &*alphabet : nullptr);
  return Header{space, std::move(alphabet), std::move(t)};
}

inline Family decode_family(const Json& j, Space space, bool many) {
  Family out;
  if (many) {
    if (!j.is_array()) throw Error(ErrorKind::Arity, "join node needs a list of sets");
    for (const auto& s : j) out.push_back(parse_set(text_of(s, "set literal"), space));
  } else {
    if (!j.is_string()) throw Error(ErrorKind::Arity, "arrow node needs a single set");
    out.push_back(parse_set(j.get<std::string>(), space));
  }
  return out;
}

}  // namespace detail

inline Json encode_flowchart(const Flowchart& f) {
  Json doc;
  detail::encode_header(doc, f.space(), f.alphabet(), f.term());
  Json assign = Json::object();
  for (const auto& [addr, fam] : f.assign()) {
    if (f.tree().label(addr).kind == TermKind::Arrow) {
      assign[address_key(addr)] = render_set(fam.front());
    } else {
      Json sets = Json::array();
      for (const auto& s : fam) sets.push_back(render_set(s));
      assign[address_key(addr)] = std::move(sets);
    }
  }
  doc["assign"] = std::move(assign);
  return doc;
}

inline Flowchart decode_flowchart(const Json& doc) {
  detail::Header h = detail::decode_header(doc);
  const SyntaxTree tree = syntax_tree(h.term);
  const Json& assign = detail::field(doc, "assign");
  if (!assign.is_object()) detail::malformed("\"assign\" must be an object");
  Flowchart::Assignment out;
  for (const auto& [key, value] : assign.items()) {
    const Address addr = parse_address_key(key);
    if (!tree.contains(addr)) throw Error(ErrorKind::InvalidAddress, "sets assigned at missing node " + render_address(addr));
    const TermKind k = tree.label(addr).kind;
    if (k != TermKind::Arrow && k != TermKind::Join)
      throw Error(ErrorKind::Arity, "node " + render_address(addr) + " takes no sets");
    out.emplace(addr, detail::decode_family(value, h.space, k == TermKind::Join));
  }
  Flowchart f(std::move(h.term), h.space, std::move(out), std::move(h.alphabet));
  if (!check_levels(f)) throw Error(ErrorKind::LevelViolation, "a declared level exceeds its node's rank");
  return f;
}

inline Json encode_command(const Command& c) {
  Json doc;
  detail::encode_header(doc, c.space(), c.alphabet(), c.term());
  Json assign = Json::object();
  for (const auto& [addr, data] : c.assign()) {
    Json rec = Json::object();
    const TermKind k = c.tree().label(addr).kind;
    if (k == TermKind::Arrow) rec["U"] = render_set(data.tests.front());
    if (k == TermKind::Join) {
      Json sets = Json::array();
      for (const auto& s : data.tests) sets.push_back(render_set(s));
      rec["U"] = std::move(sets);
    }
    Json maps = Json::array();
    for (const auto& u : data.edges) maps.push_back(encode_map(u));
    rec["u"] = std::move(maps);
    assign[address_key(addr)] = std::move(rec);
  }
  doc["assign"] = std::move(assign);
  return doc;
}

/// Edge maps are resolved against the value space at their source node,
/// so the document is decoded top-down. A missing "u" means identities.
inline Command decode_command(const Json& doc) {
  detail::Header h = detail::decode_header(doc);
  const SyntaxTree tree = syntax_tree(h.term);
  const Json& assign = detail::field(doc, "assign");
  if (!assign.is_object()) detail::malformed("\"assign\" must be an object");
  for (const auto& [key, value] : assign.items()) {
    const Address addr = parse_address_key(key);
    if (!tree.contains(addr)) throw Error(ErrorKind::InvalidAddress, "command data at missing node " + render_address(addr));
    if (tree.label(addr).kind == TermKind::Const || tree.label(addr).kind == TermKind::Var)
      throw Error(ErrorKind::Arity, "leaf " + render_address(addr) + " takes no command data");
  }
  Command::Assignment out;
  auto go = [&](auto&& self, const Address& at, Space here) -> void {
    const NodeLabel& lab = tree.label(at);
    if (lab.kind == TermKind::Const || lab.kind == TermKind::Var) return;
    const std::string key = address_key(at);
    if (!assign.contains(key)) throw Error(ErrorKind::Arity, "node " + render_address(at) + " has no command data");
    const Json& rec = assign.at(key);
    if (!rec.is_object()) detail::malformed("command data at " + render_address(at) + " must be an object");
    CommandNode data;
    if (lab.kind == TermKind::Veblen) {
      if (rec.contains("U")) throw Error(ErrorKind::Arity, "Veblen node " + render_address(at) + " takes no test");
    } else {
      data.tests = detail::decode_family(detail::field(rec, "U"), here, lab.kind == TermKind::Join);
    }
    const std::size_t arity = tree.child_count(at);
    if (rec.contains("u")) {
      const Json& maps = rec.at("u");
      if (!maps.is_array() || maps.size() != arity)
        throw Error(ErrorKind::Arity, "node " + render_address(at) + " needs " + std::to_string(arity) + " edge map(s)");
      for (const auto& m : maps) data.edges.push_back(decode_map(m, here));
    } else {
      data.edges.assign(arity, ContinuousMap::identity(here));
    }
    std::vector<Space> next;
    for (const auto& u : data.edges) next.push_back(u.output_space());
    out.emplace(at, std::move(data));
    for (std::size_t n = 0; n < arity; ++n) self(self, child_address(at, n), next[n]);
  };
  go(go, Address{}, h.space);
  return Command(std::move(h.term), h.space, std::move(out), std::move(h.alphabet));
}

}  // namespace wadge

#endif  // WADGE_CODEC_HPP
