#ifndef WADGE_COMMAND_HPP
#define WADGE_COMMAND_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wadge/continuous_map.hpp"
#include "wadge/error.hpp"
#include "wadge/flowchart.hpp"
#include "wadge/space.hpp"
#include "wadge/term.hpp"

namespace wadge {

/// Data at an inner node: the tests (one at an arrow, one per argument at a
/// join, none at a Veblen node) and the reassignment applied on each edge
/// to a child. An arrow's edge 0 is always the identity.
struct CommandNode {
  Family tests;
  std::vector<ContinuousMap> edges;

  friend bool operator==(const CommandNode&, const CommandNode&) = default;
};

class Command {
 public:
  using Assignment = std::map<Address, CommandNode>;

  Command(Term term, Space space, Assignment assign, std::optional<Alphabet> alphabet = std::nullopt)
      : term_(std::move(term)),
        space_(space),
        alphabet_(std::move(alphabet)),
        assign_(std::move(assign)),
        tree_(syntax_tree(term_)) {
    validate();
  }

  const Term& term() const { return term_; }
  const Space& space() const { return space_; }
  const std::optional<Alphabet>& alphabet() const { return alphabet_; }
  const Assignment& assign() const { return assign_; }
  const SyntaxTree& tree() const { return tree_; }

  const CommandNode& node(const Address& a) const {
    auto it = assign_.find(a);
    if (it == assign_.end()) throw Error(ErrorKind::InvalidAddress, "no command data at " + render_address(a));
    return it->second;
  }
  /// Space the stored value lives in when control is at `a`.
  const Space& value_space(const Address& a) const {
    auto it = spaces_.find(a);
    if (it == spaces_.end()) throw Error(ErrorKind::InvalidAddress, render_address(a));
    return it->second;
  }

  friend bool operator==(const Command& a, const Command& b) {
    return a.term_ == b.term_ && a.space_ == b.space_ && a.alphabet_ == b.alphabet_ && a.assign_ == b.assign_;
  }

 private:
  void validate() {
    require_closed(term_);
    if (alphabet_) {
      for (const auto& c : constants(term_))
        if (!alphabet_->count(c)) throw Error(ErrorKind::UnknownConstant, detail::quote(c));
    }
    for (const auto& [addr, data] : assign_)
      if (!tree_.contains(addr)) throw Error(ErrorKind::InvalidAddress, "command data at missing node " + render_address(addr));
    spaces_.clear();
    wire(Address{}, space_);
  }

  void wire(const Address& at, const Space& here) {
    spaces_.emplace(at, here);
    const NodeLabel& lab = tree_.label(at);
    auto it = assign_.find(at);
    if (lab.kind == TermKind::Const || lab.kind == TermKind::Var) {
      if (it != assign_.end()) throw Error(ErrorKind::Arity, "leaf " + render_address(at) + " takes no command data");
      return;
    }
    if (it == assign_.end()) throw Error(ErrorKind::Arity, "node " + render_address(at) + " has no command data");
    const CommandNode& data = it->second;
    const std::size_t arity = tree_.child_count(at);
    const std::size_t tests = lab.kind == TermKind::Arrow ? 1 : lab.kind == TermKind::Join ? arity : 0;
    if (data.tests.size() != tests)
      throw Error(ErrorKind::Arity, "node " + render_address(at) + " needs " + std::to_string(tests) + " test(s)");
    if (data.edges.size() != arity)
      throw Error(ErrorKind::Arity, "node " + render_address(at) + " needs " + std::to_string(arity) + " edge map(s)");
    if (lab.kind == TermKind::Arrow && !data.edges[0].is_identity())
      throw Error(ErrorKind::Malformed, "arrow " + render_address(at) + ": edge 0 must carry the identity map");
    for (const auto& t : data.tests) require_same_space(here, t.space(), "test at " + render_address(at));
    for (std::size_t n = 0; n < arity; ++n) {
      const ContinuousMap& u = data.edges[n];
      if (!(u.input_space() == here))
        throw Error(ErrorKind::SpaceMismatch, "edge map into " + render_address(child_address(at, n)) +
                                                  " does not read the value space at " + render_address(at));
      wire(child_address(at, n), u.output_space());
    }
  }

  Term term_;
  Space space_;
  std::optional<Alphabet> alphabet_;
  Assignment assign_;
  SyntaxTree tree_;
  std::map<Address, Space> spaces_;
};

/// Composite of the reassignments along the path to `a`, first edge first.
inline ContinuousMap val(const Command& c, const Address& a) {
  if (!c.tree().contains(a)) throw Error(ErrorKind::InvalidAddress, render_address(a));
  std::vector<ContinuousMap> parts{ContinuousMap::identity(c.space())};
  Address at;
  for (std::size_t i : a) {
    parts.push_back(c.node(at).edges[i]);
    at.push_back(i);
  }
  return ContinuousMap::compose(parts);
}

inline std::vector<Address> trace(const Command& c, const UpPoint& x) {
  require_same_space(c.space(), x.space(), "trace");
  std::vector<Address> out;
  auto go = [&](auto&& self, const Address& at, const UpPoint& y) -> void {
    out.push_back(at);
    const NodeLabel& lab = c.tree().label(at);
    if (lab.kind == TermKind::Const || lab.kind == TermKind::Var) return;
    const CommandNode& data = c.node(at);
    auto descend = [&](std::size_t n) { self(self, child_address(at, n), apply(data.edges[n], y)); };
    switch (lab.kind) {
      case TermKind::Arrow:
        descend(member(y, data.tests[0]) ? 1 : 0);
        break;
      case TermKind::Join:
        for (std::size_t n = 0; n < data.tests.size(); ++n)
          if (member(y, data.tests[n])) descend(n);
        break;
      default:
        descend(0);
        break;
    }
  };
  go(go, Address{}, x);
  return out;
}

inline std::vector<TruePath> true_paths(const Command& c, const UpPoint& x) {
  return paths_from_trace(c.tree(), trace(c, x));
}

inline Outcome eval(const Command& c, const UpPoint& x) { return outcome_of(true_paths(c, x)); }

inline bool is_simple(const Command& c) {
  for (const auto& [addr, data] : c.assign()) {
    const TermKind k = c.tree().label(addr).kind;
    if (k != TermKind::Arrow && k != TermKind::Join) continue;
    for (const auto& u : data.edges)
      if (!u.is_identity()) return false;
  }
  return true;
}

/// Every join family covers the whole value space at its node.
inline Verdict is_strongly_total(const Command& c) {
  for (const auto& [addr, data] : c.assign()) {
    if (c.tree().label(addr).kind != TermKind::Join) continue;
    ClopenSet cover = ClopenSet::empty(c.value_space(addr));
    for (const auto& t : data.tests) cover = set_union(cover, t);
    const ClopenSet gap = complement(cover);
    if (!gap.is_empty()) return {false, least_point(gap), addr};
  }
  return {};
}

/// S_sigma = val_sigma^{-1}[U_sigma] at every node, at declared level 1.
inline Flowchart command_to_flowchart(const Command& c) {
  Flowchart::Assignment out;
  for (const auto& [addr, data] : c.assign()) {
    const TermKind k = c.tree().label(addr).kind;
    if (k != TermKind::Arrow && k != TermKind::Join) continue;
    const ContinuousMap v = val(c, addr);
    Family fam;
    for (const auto& t : data.tests) fam.push_back(preimage(v, t).with_level(1));
    out.emplace(addr, std::move(fam));
  }
  return Flowchart(c.term(), c.space(), std::move(out), c.alphabet());
}

inline Verdict is_total(const Command& c) { return is_total(command_to_flowchart(c)); }
inline Verdict is_deterministic(const Command& c) { return is_deterministic(command_to_flowchart(c)); }

/// The simple command with the flowchart's sets as tests.
inline Command flowchart_to_simple_command(const Flowchart& f) {
  for (const auto& [addr, lab] : f.tree().nodes())
    if (lab.kind == TermKind::Veblen && !lab.index.is_zero())
      throw Error(ErrorKind::Unsupported, "Veblen node " + render_address(addr) + " with index " + render_ordinal(lab.index) +
                                              " needs jump operators");
  Command::Assignment out;
  const ContinuousMap id = ContinuousMap::identity(f.space());
  for (const auto& [addr, lab] : f.tree().nodes()) {
    if (lab.kind == TermKind::Const || lab.kind == TermKind::Var) continue;
    CommandNode data;
    if (lab.kind != TermKind::Veblen) data.tests = f.family(addr);
    data.edges.assign(f.tree().child_count(addr), id);
    out.emplace(addr, std::move(data));
  }
  return Command(f.term(), f.space(), std::move(out), f.alphabet());
}

namespace detail {

// Per-node state of the strongly-total construction. The new command holds
// iota(x) at a node whose old domain is D; iota maps D onto `zone` and
// `back` is its inverse, defined on the whole space.
struct Transport {
  ContinuousMap back;
  ClopenSet zone;
};

}  // namespace detail

/// An equivalent command whose join families all cover the whole space.
/// Input must be simple, Veblen-free, and cover its domains at every join.
inline Command make_strongly_total(const Command& c) {
  if (has_veblen(c.term())) throw Error(ErrorKind::Unsupported, "strongly-total construction needs a Veblen-free term");
  if (!is_simple(c)) throw Error(ErrorKind::Precondition, "strongly-total construction needs a simple command");
  const Flowchart f = command_to_flowchart(c);
  if (auto v = covers_domains(f); !v)
    throw Error(ErrorKind::Precondition, "join at " + render_address(*v.at) + " does not cover its domain (point " +
                                             render_point(*v.witness) + ")");
  const Space z = c.space();
  const ContinuousMap id = ContinuousMap::identity(z);
  const ClopenSet full = ClopenSet::full(z);
  Command::Assignment out;

  // Enter a branch whose transported domain is `sel`: strip it onto the
  // whole space, or stay put when nothing is left.
  auto enter = [&](const detail::Transport& here, const ClopenSet& sel) -> std::pair<ContinuousMap, detail::Transport> {
    if (sel.is_empty()) return {id, {here.back, ClopenSet::empty(z)}};
    return {ContinuousMap::in_inverse(sel), {then(ContinuousMap::in_map(sel), here.back), full}};
  };

  auto go = [&](auto&& self, const Address& at, const detail::Transport& here) -> void {
    const NodeLabel& lab = c.tree().label(at);
    if (lab.kind == TermKind::Const) return;
    const CommandNode& old = c.node(at);
    CommandNode data;
    if (lab.kind == TermKind::Arrow) {
      const ClopenSet v = intersect(here.zone, preimage(here.back, old.tests[0])).with_level(1);
      auto [u1, t1] = enter(here, v);
      data.tests = {v};
      data.edges = {id, u1};
      out.emplace(at, std::move(data));
      self(self, child_address(at, 0), detail::Transport{here.back, difference(here.zone, v).with_level(1)});
      self(self, child_address(at, 1), t1);
      return;
    }
    // join
    std::vector<detail::Transport> next;
    for (const auto& u : old.tests) {
      const ClopenSet v = intersect(here.zone, preimage(here.back, u)).with_level(1);
      auto [un, tn] = enter(here, v);
      data.tests.push_back(v);
      data.edges.push_back(un);
      next.push_back(std::move(tn));
    }
    data.tests[0] = set_union(data.tests[0], complement(here.zone)).with_level(1);
    out.emplace(at, std::move(data));
    for (std::size_t n = 0; n < next.size(); ++n) self(self, child_address(at, n), next[n]);
  };
  go(go, Address{}, detail::Transport{id, full});
  return Command(c.term(), z, std::move(out), c.alphabet());
}

}  // namespace wadge

#endif  // WADGE_COMMAND_HPP
