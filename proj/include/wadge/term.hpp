#ifndef WADGE_TERM_HPP
#define WADGE_TERM_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wadge/detail/cursor.hpp"
#include "wadge/error.hpp"
#include "wadge/ordinal.hpp"

namespace wadge {

enum class TermKind { Const, Var, Arrow, Join, Veblen };

/// The declared finite label alphabet Q of a document.
using Alphabet = std::set<std::string>;

/// A term over constants, variables, the binary arrow, finitary joins and
/// the Veblen symbols veb[a](.). Value type; children are owned.
class Term {
 public:
  static Term constant(std::string label) { return Term(TermKind::Const, std::move(label), {}, {}); }
  static Term var(std::string name) { return Term(TermKind::Var, std::move(name), {}, {}); }
  static Term arrow(Term left, Term right) {
    std::vector<Term> kids;
    kids.push_back(std::move(left));
    kids.push_back(std::move(right));
    return Term(TermKind::Arrow, {}, {}, std::move(kids));
  }
  static Term join(std::vector<Term> children) {
    if (children.empty()) throw Error(ErrorKind::Arity, "join needs at least one argument");
    return Term(TermKind::Join, {}, {}, std::move(children));
  }
  static Term veblen(CnfOrdinal index, Term child) {
    std::vector<Term> kids;
    kids.push_back(std::move(child));
    return Term(TermKind::Veblen, {}, std::move(index), std::move(kids));
  }

  TermKind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == TermKind::Const || kind_ == TermKind::Var; }
  /// Constant label or variable name.
  const std::string& name() const { return name_; }
  const CnfOrdinal& index() const { return index_; }
  const std::vector<Term>& children() const { return children_; }
  const Term& child(std::size_t i) const { return children_.at(i); }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string name, CnfOrdinal index, std::vector<Term> children)
      : kind_(kind), name_(std::move(name)), index_(std::move(index)), children_(std::move(children)) {}

  TermKind kind_;
  std::string name_;
  CnfOrdinal index_;
  std::vector<Term> children_;
};

/// A node of a syntax tree, addressed by the path of child indices from the root.
using Address = std::vector<std::size_t>;

inline Address child_address(Address a, std::size_t i) {
  a.push_back(i);
  return a;
}

inline bool is_prefix(const Address& p, const Address& a) {
  return p.size() <= a.size() && std::equal(p.begin(), p.end(), a.begin());
}

/// Human form: "ε" for the root, "(0,1)" otherwise.
inline std::string render_address(const Address& a) {
  if (a.empty()) return "ε";
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out + ")";
}

/// Document key form: "" for the root, "0.1" otherwise.
inline std::string address_key(const Address& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(a[i]);
  }
  return out;
}

inline Address parse_address_key(std::string_view key) {
  Address a;
  if (key.empty()) return a;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = key.find('.', start);
    std::string_view part = key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw Error(ErrorKind::Malformed, "bad address key '" + std::string(key) + "'");
    a.push_back(std::stoul(std::string(part)));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return a;
}

struct NodeLabel {
  TermKind kind;
  std::string name;   // Const / Var
  CnfOrdinal index;   // Veblen

  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

/// The labeled tree of a term as a prefix-closed set of addresses.
/// Arrow puts its left operand under 0 and its right under 1; a join's
/// i-th argument sits under i; a Veblen node's argument under 0.
class SyntaxTree {
 public:
  using Nodes = std::map<Address, NodeLabel>;

  SyntaxTree() = default;
  explicit SyntaxTree(Nodes nodes) : nodes_(std::move(nodes)) {}

  const Nodes& nodes() const { return nodes_; }
  bool contains(const Address& a) const { return nodes_.count(a) != 0; }

  const NodeLabel& label(const Address& a) const {
    auto it = nodes_.find(a);
    if (it == nodes_.end()) throw Error(ErrorKind::InvalidAddress, render_address(a));
    return it->second;
  }

  std::size_t child_count(const Address& a) const {
    std::size_t n = 0;
    while (contains(child_address(a, n))) ++n;
    return n;
  }

  /// Checks prefix closure and that child arities match labels.
  void validate() const {
    if (!contains({})) throw Error(ErrorKind::Malformed, "syntax tree has no root");
    for (const auto& [addr, lab] : nodes_) {
      if (!addr.empty()) {
        Address parent(addr.begin(), addr.end() - 1);
        if (!contains(parent)) throw Error(ErrorKind::Malformed, "address " + render_address(addr) + " has no parent");
      }
      // every child index must be contiguous from 0
      std::size_t n = child_count(addr);
      auto next = nodes_.upper_bound(addr);
      for (; next != nodes_.end() && is_prefix(addr, next->first); ++next) {
        if (next->first.size() == addr.size() + 1 && next->first.back() >= n)
          throw Error(ErrorKind::Arity, "non-contiguous children under " + render_address(addr));
      }
      switch (lab.kind) {
        case TermKind::Const:
        case TermKind::Var:
          if (n != 0) throw Error(ErrorKind::Arity, "leaf " + render_address(addr) + " has children");
          break;
        case TermKind::Arrow:
          if (n != 2) throw Error(ErrorKind::Arity, "arrow " + render_address(addr) + " needs 2 children");
          break;
        case TermKind::Join:
          if (n < 1) throw Error(ErrorKind::Arity, "join " + render_address(addr) + " needs children");
          break;
        case TermKind::Veblen:
          if (n != 1) throw Error(ErrorKind::Arity, "veblen " + render_address(addr) + " needs 1 child");
          break;
      }
    }
  }

  friend bool operator==(const SyntaxTree&, const SyntaxTree&) = default;

 private:
  Nodes nodes_;
};

namespace detail {

inline void build_tree(const Term& t, Address& at, SyntaxTree::Nodes& out) {
  out.emplace(at, NodeLabel{t.kind(), t.name(), t.index()});
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    at.push_back(i);
    build_tree(t.children()[i], at, out);
    at.pop_back();
  }
}

inline Term rebuild(const SyntaxTree& tree, const Address& at) {
  const NodeLabel& lab = tree.label(at);
  switch (lab.kind) {
    case TermKind::Const: return Term::constant(lab.name);
    case TermKind::Var: return Term::var(lab.name);
    case TermKind::Arrow: return Term::arrow(rebuild(tree, child_address(at, 0)), rebuild(tree, child_address(at, 1)));
    case TermKind::Veblen: return Term::veblen(lab.index, rebuild(tree, child_address(at, 0)));
    case TermKind::Join: {
      std::vector<Term> kids;
      for (std::size_t i = 0, n = tree.child_count(at); i < n; ++i) kids.push_back(rebuild(tree, child_address(at, i)));
      return Term::join(std::move(kids));
    }
  }
  throw Error(ErrorKind::Internal, "bad label");
}

}  // namespace detail

inline SyntaxTree syntax_tree(const Term& t) {
  SyntaxTree::Nodes nodes;
  Address at;
  detail::build_tree(t, at, nodes);
  return SyntaxTree(std::move(nodes));
}

inline Term term_from_tree(const SyntaxTree& tree) {
  tree.validate();
  return detail::rebuild(tree, {});
}

inline const Term& subterm(const Term& t, const Address& a) {
  const Term* cur = &t;
  for (std::size_t i : a) {
    if (i >= cur->children().size()) throw Error(ErrorKind::InvalidAddress, render_address(a));
    cur = &cur->children()[i];
  }
  return *cur;
}

inline bool is_closed(const Term& t) {
  if (t.kind() == TermKind::Var) return false;
  return std::all_of(t.children().begin(), t.children().end(), [](const Term& c) { return is_closed(c); });
}

inline void require_closed(const Term& t) {
  if (!is_closed(t)) throw Error(ErrorKind::OpenTerm, "semantic operations need a closed term");
}

inline std::size_t term_depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& c : t.children()) d = std::max(d, 1 + term_depth(c));
  return d;
}

inline void collect_constants(const Term& t, Alphabet& out) {
  if (t.kind() == TermKind::Const) out.insert(t.name());
  for (const auto& c : t.children()) collect_constants(c, out);
}

inline Alphabet constants(const Term& t) {
  Alphabet out;
  collect_constants(t, out);
  return out;
}

inline bool has_veblen(const Term& t) {
  if (t.kind() == TermKind::Veblen) return true;
  return std::any_of(t.children().begin(), t.children().end(), [](const Term& c) { return has_veblen(c); });
}

// Syntactic predicates. Each comes in a structural form on the Term and a
// node-wise form on the SyntaxTree; the two are tested against each other.

inline bool is_well_formed(const Term& t) {
  if (t.kind() == TermKind::Veblen && t.child(0).kind() == TermKind::Join) return false;
  return std::all_of(t.children().begin(), t.children().end(), [](const Term& c) { return is_well_formed(c); });
}

inline bool is_well_formed(const SyntaxTree& tree) {
  for (const auto& [addr, lab] : tree.nodes()) {
    if (lab.kind == TermKind::Veblen && tree.label(child_address(addr, 0)).kind == TermKind::Join) return false;
  }
  return true;
}

inline bool is_normal(const Term& t) {
  if (t.kind() == TermKind::Arrow) {
    const Term& l = t.child(0);
    if (!(l.is_leaf() || l.kind() == TermKind::Veblen)) return false;
    if (t.child(1).kind() != TermKind::Join) return false;
  }
  return std::all_of(t.children().begin(), t.children().end(), [](const Term& c) { return is_normal(c); });
}

inline bool is_normal(const SyntaxTree& tree) {
  for (const auto& [addr, lab] : tree.nodes()) {
    if (lab.kind != TermKind::Arrow) continue;
    const Address left = child_address(addr, 0);
    const bool left_leaf = tree.child_count(left) == 0;
    if (!(left_leaf || tree.label(left).kind == TermKind::Veblen)) return false;
    if (tree.label(child_address(addr, 1)).kind != TermKind::Join) return false;
  }
  return true;
}

/// Rewrites veb[b](veb[a](s)) to veb[a](s) whenever b < a, everywhere,
/// until no redex is left. Equal indices are not collapsed.
inline Term apply_fixed_point(const Term& t) {
  if (t.is_leaf()) return t;
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (const auto& c : t.children()) kids.push_back(apply_fixed_point(c));
  switch (t.kind()) {
    case TermKind::Arrow: return Term::arrow(std::move(kids[0]), std::move(kids[1]));
    case TermKind::Join: return Term::join(std::move(kids));
    case TermKind::Veblen:
      // the child is already a normal form, so one check suffices
      if (kids[0].kind() == TermKind::Veblen && t.index() < kids[0].index()) return std::move(kids[0]);
      return Term::veblen(t.index(), std::move(kids[0]));
    default: return t;
  }
}

struct Neck {
  std::vector<CnfOrdinal> head;
  Term body;
};

/// Splits t = veb[a0](veb[a1](... t' ...)) into ([a0, a1, ...], t').
inline Neck neck(const Term& t) {
  Neck out{{}, t};
  while (out.body.kind() == TermKind::Veblen) {
    out.head.push_back(out.body.index());
    Term next = out.body.child(0);
    out.body = std::move(next);
  }
  return out;
}

inline Term reassemble(const Neck& n) {
  Term t = n.body;
  for (auto it = n.head.rbegin(); it != n.head.rend(); ++it) t = Term::veblen(*it, std::move(t));
  return t;
}

/// Veblen indices on the proper prefixes of `a`, root first.
inline std::vector<CnfOrdinal> veblen_segments(const SyntaxTree& tree, const Address& a) {
  if (!tree.contains(a)) throw Error(ErrorKind::InvalidAddress, render_address(a));
  std::vector<CnfOrdinal> out;
  Address p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const NodeLabel& lab = tree.label(p);
    if (lab.kind == TermKind::Veblen) out.push_back(lab.index);
    p.push_back(a[i]);
  }
  return out;
}

inline CnfOrdinal borel_rank(const SyntaxTree& tree, const Address& a) { return rank_sum(veblen_segments(tree, a)); }

inline CnfOrdinal borel_rank(const Term& t, const Address& a) { return borel_rank(syntax_tree(t), a); }

inline std::map<Address, CnfOrdinal> borel_ranks(const SyntaxTree& tree) {
  std::map<Address, CnfOrdinal> out;
  for (const auto& [addr, lab] : tree.nodes()) {
    if (addr.empty()) {
      out.emplace(addr, CnfOrdinal(1));
      continue;
    }
    Address parent(addr.begin(), addr.end() - 1);
    const CnfOrdinal& pr = out.at(parent);
    const NodeLabel& pl = tree.label(parent);
    out.emplace(addr, pl.kind == TermKind::Veblen ? add(pr, omega_pow(pl.index)) : pr);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Term DSL

namespace detail {

inline Term parse_term_expr(Cursor& in, const Alphabet* declared);

inline Term parse_atom(Cursor& in, const Alphabet* declared) {
  in.skip_ws();
  if (in.accept("join")) {
    in.expect('(');
    std::vector<Term> kids;
    kids.push_back(parse_term_expr(in, declared));
    while (in.accept(',')) kids.push_back(parse_term_expr(in, declared));
    in.expect(')');
    return Term::join(std::move(kids));
  }
  if (in.accept("veb")) {
    in.expect('[');
    CnfOrdinal idx = parse_ordinal_sum(in);
    in.expect(']');
    in.expect('(');
    Term child = parse_term_expr(in, declared);
    in.expect(')');
    return Term::veblen(std::move(idx), std::move(child));
  }
  if (in.peek() == 'q') {
    Cursor probe = in;
    probe.get();
    if (probe.peek() == '"') {
      in.get();
      Cursor at = in;
      std::string label = in.string_literal();
      if (declared && !declared->count(label))
        throw Error(ErrorKind::UnknownConstant, quote(label) + " at " + std::to_string(at.line()) + ":" +
                                                    std::to_string(at.column()) + " is not in the declared alphabet");
      return Term::constant(std::move(label));
    }
  }
  if (in.peek() == 'x') {
    Cursor probe = in;
    probe.get();
    if (probe.peek() == '"') {
      in.get();
      return Term::var(in.string_literal());
    }
  }
  if (in.accept('(')) {
    Term t = parse_term_expr(in, declared);
    in.expect(')');
    return t;
  }
  in.fail("expected a term");
}

inline Term parse_term_expr(Cursor& in, const Alphabet* declared) {
  Term left = parse_atom(in, declared);
  if (in.accept("~>")) return Term::arrow(std::move(left), parse_term_expr(in, declared));
  return left;
}

inline Alphabet parse_alphabet_decl(Cursor& in) {
  Alphabet q;
  in.expect('{');
  if (!in.accept('}')) {
    do {
      q.insert(in.string_literal());
    } while (in.accept(','));
    in.expect('}');
  }
  return q;
}

}  // namespace detail

/// Parses the term DSL. With a declared alphabet, constants outside it are
/// rejected with ErrorKind::UnknownConstant.
inline Term parse_term(std::string_view text, const Alphabet* declared = nullptr) {
  detail::Cursor in(text);
  Term t = detail::parse_term_expr(in, declared);
  in.expect_end();
  return t;
}

inline std::string render_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Const: return "q" + detail::quote(t.name());
    case TermKind::Var: return "x" + detail::quote(t.name());
    case TermKind::Arrow: return "(" + render_term(t.child(0)) + " ~> " + render_term(t.child(1)) + ")";
    case TermKind::Veblen: return "veb[" + render_ordinal(t.index()) + "](" + render_term(t.child(0)) + ")";
    case TermKind::Join: {
      std::string out = "join(";
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ", ";
        out += render_term(t.children()[i]);
      }
      return out + ")";
    }
  }
  return {};
}

/// A `.term` file: an optional alphabet declaration `Q{"a", "b"}` followed by a term.
struct TermDocument {
  std::optional<Alphabet> alphabet;
  Term term;
};

inline TermDocument parse_term_document(std::string_view text) {
  detail::Cursor in(text);
  std::optional<Alphabet> q;
  in.skip_ws();
  if (in.peek() == 'Q') {
    in.get();
    q = detail::parse_alphabet_decl(in);
  }
  Term t = detail::parse_term_expr(in, q ? &*q : nullptr);
  in.expect_end();
  return TermDocument{std::move(q), std::move(t)};
}

}  // namespace wadge

#endif  // WADGE_TERM_HPP
