#ifndef WADGE_GENERATE_HPP
#define WADGE_GENERATE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wadge/command.hpp"
#include "wadge/continuous_map.hpp"
#include "wadge/flowchart.hpp"
#include "wadge/ordinal.hpp"
#include "wadge/space.hpp"
#include "wadge/term.hpp"

namespace wadge::gen {

using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline CnfOrdinal ordinal(Rng& rng, int depth = 2) {
  if (depth <= 0 || coin(rng, 0.4)) return CnfOrdinal(static_cast<int>(below(rng, 4)));
  std::vector<CnfTerm> terms;
  const std::size_t n = 1 + below(rng, 2);
  for (std::size_t i = 0; i < n; ++i) terms.push_back(CnfTerm{ordinal(rng, depth - 1), Natural(1 + below(rng, 3))});
  return CnfOrdinal::from_terms(terms);
}

struct TermShape {
  std::size_t max_depth = 4;
  std::size_t labels = 3;
  std::size_t max_join = 3;
  bool veblen = true;
  bool normal = false;     // only normal terms
  bool variables = false;  // allow open terms
};

inline std::string label_name(std::size_t i) { return "q" + std::to_string(i); }

inline Alphabet alphabet(std::size_t labels) {
  Alphabet a;
  for (std::size_t i = 0; i < labels; ++i) a.insert(label_name(i));
  return a;
}

namespace detail {

inline Term leaf(Rng& rng, const TermShape& s) {
  if (s.variables && coin(rng, 0.15)) return Term::var("x" + std::to_string(below(rng, 2)));
  return Term::constant(label_name(below(rng, s.labels)));
}

inline Term any_term(Rng& rng, const TermShape& s, std::size_t depth);

inline Term join_term(Rng& rng, const TermShape& s, std::size_t depth) {
  std::vector<Term> kids;
  const std::size_t m = 1 + below(rng, s.max_join);
  for (std::size_t i = 0; i < m; ++i) kids.push_back(any_term(rng, s, depth - 1));
  return Term::join(std::move(kids));
}

inline Term veblen_term(Rng& rng, const TermShape& s, std::size_t depth) {
  return Term::veblen(ordinal(rng, 1), any_term(rng, s, depth - 1));
}

// Normal shape: an arrow's left side is a leaf or a Veblen node, its right
// side a join. Veblen over join is left to the well-formedness check.
inline Term normal_left(Rng& rng, const TermShape& s, std::size_t depth) {
  if (depth >= 2 && s.veblen && coin(rng, 0.35)) return veblen_term(rng, s, depth);
  return leaf(rng, s);
}

inline Term any_term(Rng& rng, const TermShape& s, std::size_t depth) {
  if (depth <= 1 || coin(rng, 0.25)) return leaf(rng, s);
  const std::size_t pick = below(rng, s.veblen ? 3 : 2);
  if (pick == 0) {
    if (s.normal) {
      if (depth < 3) return leaf(rng, s);
      return Term::arrow(normal_left(rng, s, depth - 1), join_term(rng, s, depth - 1));
    }
    return Term::arrow(any_term(rng, s, depth - 1), any_term(rng, s, depth - 1));
  }
  if (pick == 1) return join_term(rng, s, depth);
  return veblen_term(rng, s, depth);
}

}  // namespace detail

inline Term term(Rng& rng, const TermShape& s) { return detail::any_term(rng, s, s.max_depth + 1); }

/// A normal, well-formed term that is never a bare leaf.
inline Term normal_term(Rng& rng, TermShape s) {
  s.normal = true;
  for (;;) {
    Term t = term(rng, s);
    if (!t.is_leaf() && is_well_formed(t)) return t;
  }
}

/// Random clopen set: a random collection of words of length `depth`.
inline ClopenSet clopen(Rng& rng, Space space, std::size_t depth, double density = 0.5) {
  std::vector<Word> words;
  Word w(depth, 0);
  for (;;) {
    if (coin(rng, density)) words.push_back(w);
    std::size_t i = depth;
    while (i > 0 && w[i - 1] + 1 == space.k) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  if (depth == 0 && !words.empty()) return ClopenSet::full(space);
  return ClopenSet(space, std::move(words));
}

inline ClopenSet varied_clopen(Rng& rng, Space space, std::size_t max_depth) {
  const double pick = std::uniform_real_distribution<double>(0, 1)(rng);
  if (pick < 0.08) return ClopenSet::empty(space);
  if (pick < 0.14) return ClopenSet::full(space);
  return clopen(rng, space, 1 + below(rng, max_depth), std::uniform_real_distribution<double>(0.2, 0.8)(rng));
}

/// Arbitrary sets at every arrow and join node.
inline Flowchart flowchart(Rng& rng, const Term& t, Space space, std::size_t set_depth) {
  const SyntaxTree tree = syntax_tree(t);
  Flowchart::Assignment assign;
  for (const auto& [addr, lab] : tree.nodes()) {
    if (lab.kind == TermKind::Arrow) assign[addr] = {varied_clopen(rng, space, set_depth)};
    if (lab.kind == TermKind::Join) {
      Family fam;
      for (std::size_t n = 0; n < tree.child_count(addr); ++n) fam.push_back(varied_clopen(rng, space, set_depth));
      assign[addr] = std::move(fam);
    }
  }
  return Flowchart(t, space, std::move(assign));
}

/// Sets chosen top-down so that every join family partitions its node's
/// domain. The result is total and deterministic; points outside a node's
/// domain get random extra membership.
inline Flowchart total_deterministic_flowchart(Rng& rng, const Term& t, Space space, std::size_t set_depth) {
  const SyntaxTree tree = syntax_tree(t);
  Flowchart::Assignment assign;
  auto go = [&](auto&& self, const Address& at, const ClopenSet& dom) -> void {
    const NodeLabel& lab = tree.label(at);
    if (lab.kind == TermKind::Arrow) {
      const ClopenSet s = varied_clopen(rng, space, set_depth);
      assign[at] = {s};
      self(self, child_address(at, 0), difference(dom, s).with_level(1));
      self(self, child_address(at, 1), intersect(dom, s));
    } else if (lab.kind == TermKind::Join) {
      const std::size_t m = tree.child_count(at);
      Family fam;
      ClopenSet used = ClopenSet::empty(space);
      for (std::size_t n = 0; n < m; ++n) {
        fam.push_back(intersect(difference(varied_clopen(rng, space, set_depth), used), dom).with_level(1));
        used = set_union(used, fam.back());
      }
      const std::size_t pad = below(rng, m);
      fam[pad] = set_union(fam[pad], difference(dom, used)).with_level(1);
      const ClopenSet outside = complement(dom).with_level(1);
      for (auto& s : fam)
        if (coin(rng, 0.4)) s = set_union(s, intersect(varied_clopen(rng, space, set_depth), outside)).with_level(1);
      for (std::size_t n = 0; n < m; ++n) self(self, child_address(at, n), intersect(dom, fam[n]));
      assign[at] = std::move(fam);
    } else if (lab.kind == TermKind::Veblen) {
      self(self, child_address(at, 0), dom);
    }
  };
  go(go, Address{}, ClopenSet::full(space));
  return Flowchart(t, space, std::move(assign));
}

/// A random reassignment map on `space`.
inline ContinuousMap map(Rng& rng, Space space, std::size_t set_depth) {
  switch (below(rng, 6)) {
    case 0: return ContinuousMap::identity(space);
    case 1: return ContinuousMap::drop_first(space);
    case 2: return ContinuousMap::doubling(space);
    case 3: {
      ClopenSet v = clopen(rng, space, 1 + below(rng, set_depth));
      if (v.is_empty()) v = ClopenSet::cylinder(space, Word{0});
      if (space.k > 2 && (v.antichain().size() - 1) % (space.k - 1) != 0) return ContinuousMap::identity(space);
      return ContinuousMap::in_map(v);
    }
    case 4: {
      ClopenSet v = clopen(rng, space, 1 + below(rng, set_depth));
      if (v.is_full()) v = ClopenSet::cylinder(space, Word{0});
      return ContinuousMap::out_map(v);
    }
    default: return ContinuousMap::compose({ContinuousMap::drop_first(space), ContinuousMap::doubling(space)});
  }
}

/// Random tests and reassignments; arrow edge 0 stays the identity.
inline Command command(Rng& rng, const Term& t, Space space, std::size_t set_depth) {
  const SyntaxTree tree = syntax_tree(t);
  Command::Assignment assign;
  const ContinuousMap id = ContinuousMap::identity(space);
  for (const auto& [addr, lab] : tree.nodes()) {
    if (lab.kind == TermKind::Const || lab.kind == TermKind::Var) continue;
    CommandNode data;
    const std::size_t m = tree.child_count(addr);
    if (lab.kind == TermKind::Arrow) data.tests = {varied_clopen(rng, space, set_depth)};
    if (lab.kind == TermKind::Join)
      for (std::size_t n = 0; n < m; ++n) data.tests.push_back(varied_clopen(rng, space, set_depth));
    for (std::size_t n = 0; n < m; ++n)
      data.edges.push_back(lab.kind == TermKind::Arrow && n == 0 ? id : map(rng, space, set_depth));
    assign.emplace(addr, std::move(data));
  }
  return Command(t, space, std::move(assign));
}

}  // namespace wadge::gen

#endif  // WADGE_GENERATE_HPP
