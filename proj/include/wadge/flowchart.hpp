#ifndef WADGE_FLOWCHART_HPP
#define WADGE_FLOWCHART_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wadge/continuous_map.hpp"
#include "wadge/error.hpp"
#include "wadge/space.hpp"
#include "wadge/term.hpp"

namespace wadge {

/// Sets assigned to one node: a single test at an arrow, one set per
/// argument at a join.
using Family = std::vector<ClopenSet>;
using DomainAssignment = std::map<Address, ClopenSet>;

/// A closed term with a clopen test at every arrow node and a family of
/// clopen sets (one per argument) at every join node. Leaves and Veblen
/// nodes implicitly carry the whole space.
class Flowchart {
 public:
  using Assignment = std::map<Address, Family>;

  Flowchart(Term term, Space space, Assignment assign, std::optional<Alphabet> alphabet = std::nullopt)
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

  const Family& family(const Address& a) const {
    auto it = assign_.find(a);
    if (it == assign_.end()) throw Error(ErrorKind::InvalidAddress, "no sets assigned at " + render_address(a));
    return it->second;
  }
  const ClopenSet& test(const Address& a) const { return family(a).front(); }

  friend bool operator==(const Flowchart& a, const Flowchart& b) {
    return a.term_ == b.term_ && a.space_ == b.space_ && a.alphabet_ == b.alphabet_ && a.assign_ == b.assign_;
  }

 private:
  void validate() const {
    require_closed(term_);
    if (alphabet_) {
      for (const auto& c : constants(term_))
        if (!alphabet_->count(c)) throw Error(ErrorKind::UnknownConstant, detail::quote(c));
    }
    for (const auto& [addr, lab] : tree_.nodes()) {
      const bool wants = lab.kind == TermKind::Arrow || lab.kind == TermKind::Join;
      auto it = assign_.find(addr);
      if (!wants) {
        if (it != assign_.end())
          throw Error(ErrorKind::Arity, "node " + render_address(addr) + " carries the whole space and takes no sets");
        continue;
      }
      if (it == assign_.end()) throw Error(ErrorKind::Arity, "node " + render_address(addr) + " has no assigned sets");
      const std::size_t want = lab.kind == TermKind::Arrow ? 1 : tree_.child_count(addr);
      if (it->second.size() != want)
        throw Error(ErrorKind::Arity, "node " + render_address(addr) + " needs " + std::to_string(want) + " set(s), got " +
                                          std::to_string(it->second.size()));
      for (const auto& s : it->second) require_same_space(space_, s.space(), "flowchart set");
    }
    for (const auto& [addr, fam] : assign_)
      if (!tree_.contains(addr)) throw Error(ErrorKind::InvalidAddress, "sets assigned at missing node " + render_address(addr));
  }

  Term term_;
  Space space_;
  std::optional<Alphabet> alphabet_;
  Assignment assign_;
  SyntaxTree tree_;
};

// ---------------------------------------------------------------------------
// Evaluation

enum class EvalStatus { Value, NoTruePath, AmbiguousLabels };

struct Outcome {
  EvalStatus status = EvalStatus::NoTruePath;
  std::string label;

  bool ok() const { return status == EvalStatus::Value; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

inline std::string render_outcome(const Outcome& o) {
  switch (o.status) {
    case EvalStatus::Value: return o.label;
    case EvalStatus::NoTruePath: return "NoTruePath";
    case EvalStatus::AmbiguousLabels: return "AmbiguousLabels";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, const Outcome& o) { return os << render_outcome(o); }

struct TruePath {
  Address leaf;
  std::string label;

  friend bool operator==(const TruePath&, const TruePath&) = default;
};

/// A yes/no verdict with a point exhibiting a failure and the node at
/// which it was found.
struct Verdict {
  bool holds = true;
  std::optional<UpPoint> witness;
  std::optional<Address> at;

  explicit operator bool() const { return holds; }
};

inline Outcome outcome_of(const std::vector<TruePath>& paths) {
  if (paths.empty()) return {EvalStatus::NoTruePath, {}};
  for (const auto& p : paths)
    if (p.label != paths.front().label) return {EvalStatus::AmbiguousLabels, {}};
  return {EvalStatus::Value, paths.front().label};
}

/// True positions for x, by the recursion over the tree, in address order.
inline std::vector<Address> trace(const Flowchart& f, const UpPoint& x) {
  require_same_space(f.space(), x.space(), "trace");
  std::vector<Address> out;
  auto go = [&](auto&& self, const Address& at) -> void {
    out.push_back(at);
    const NodeLabel& lab = f.tree().label(at);
    switch (lab.kind) {
      case TermKind::Arrow:
        self(self, child_address(at, member(x, f.test(at)) ? 1 : 0));
        break;
      case TermKind::Join: {
        const Family& fam = f.family(at);
        for (std::size_t n = 0; n < fam.size(); ++n)
          if (member(x, fam[n])) self(self, child_address(at, n));
        break;
      }
      case TermKind::Veblen:
        self(self, child_address(at, 0));
        break;
      default:
        break;
    }
  };
  go(go, Address{});
  return out;
}

inline std::vector<TruePath> paths_from_trace(const SyntaxTree& tree, const std::vector<Address>& positions) {
  std::vector<TruePath> out;
  for (const auto& a : positions) {
    const NodeLabel& lab = tree.label(a);
    if (lab.kind == TermKind::Const) out.push_back({a, lab.name});
  }
  return out;
}

inline std::vector<TruePath> true_paths(const Flowchart& f, const UpPoint& x) {
  return paths_from_trace(f.tree(), trace(f, x));
}

inline Outcome eval(const Flowchart& f, const UpPoint& x) { return outcome_of(true_paths(f, x)); }

inline DomainAssignment domain_assignment(const Flowchart& f) {
  DomainAssignment d;
  auto go = [&](auto&& self, const Address& at, const ClopenSet& here) -> void {
    d.emplace(at, here);
    const NodeLabel& lab = f.tree().label(at);
    switch (lab.kind) {
      case TermKind::Arrow:
        self(self, child_address(at, 0), difference(here, f.test(at)));
        self(self, child_address(at, 1), intersect(here, f.test(at)));
        break;
      case TermKind::Join: {
        const Family& fam = f.family(at);
        for (std::size_t n = 0; n < fam.size(); ++n) self(self, child_address(at, n), intersect(here, fam[n]));
        break;
      }
      case TermKind::Veblen:
        self(self, child_address(at, 0), here);
        break;
      default:
        break;
    }
  };
  go(go, Address{}, ClopenSet::full(f.space()));
  return d;
}

/// True paths read off the domain assignment instead of the recursion.
inline std::vector<TruePath> true_paths_via_domains(const Flowchart& f, const DomainAssignment& d, const UpPoint& x) {
  std::vector<TruePath> out;
  for (const auto& [addr, dom] : d) {
    const NodeLabel& lab = f.tree().label(addr);
    if (lab.kind == TermKind::Const && member(x, dom)) out.push_back({addr, lab.name});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decision procedures

/// Every point has a true path: the leaf domains cover the space.
inline Verdict is_total(const Flowchart& f) {
  const auto d = domain_assignment(f);
  ClopenSet reached = ClopenSet::empty(f.space());
  for (const auto& [addr, dom] : d)
    if (f.tree().label(addr).kind == TermKind::Const) reached = set_union(reached, dom);
  const ClopenSet missed = complement(reached);
  if (missed.is_empty()) return {};
  return {false, least_point(missed), std::nullopt};
}

/// Every join family covers its node's domain, so that every true position
/// extends to a true path. Implies is_total; the converse fails when a
/// dead end under one join argument is masked by a sibling argument.
inline Verdict covers_domains(const Flowchart& f) {
  const auto d = domain_assignment(f);
  for (const auto& [addr, fam] : f.assign()) {
    if (f.tree().label(addr).kind != TermKind::Join) continue;
    ClopenSet cover = ClopenSet::empty(f.space());
    for (const auto& s : fam) cover = set_union(cover, s);
    const ClopenSet gap = difference(d.at(addr), cover);
    if (!gap.is_empty()) return {false, least_point(gap), addr};
  }
  return {};
}

inline Verdict is_deterministic(const Flowchart& f) {
  const auto d = domain_assignment(f);
  std::vector<std::pair<Address, std::string>> leaves;
  for (const auto& [addr, lab] : f.tree().nodes())
    if (lab.kind == TermKind::Const) leaves.emplace_back(addr, lab.name);
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      if (leaves[i].second == leaves[j].second) continue;
      const ClopenSet both = intersect(d.at(leaves[i].first), d.at(leaves[j].first));
      if (!both.is_empty()) return {false, least_point(both), leaves[j].first};
    }
  return {};
}

/// Every assigned set lies inside its node's domain.
inline Verdict is_monotone(const Flowchart& f) {
  const auto d = domain_assignment(f);
  for (const auto& [addr, fam] : f.assign())
    for (const auto& s : fam) {
      const ClopenSet extra = difference(s, d.at(addr));
      if (!extra.is_empty()) return {false, least_point(extra), addr};
    }
  return {};
}

inline Verdict is_reduced(const Flowchart& f) {
  for (const auto& [addr, fam] : f.assign()) {
    if (f.tree().label(addr).kind != TermKind::Join) continue;
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j) {
        const ClopenSet both = intersect(fam[i], fam[j]);
        if (!both.is_empty()) return {false, least_point(both), addr};
      }
  }
  return {};
}

/// Declared level of every assigned set is at most the node's Borel rank.
inline bool check_levels(const Flowchart& f) {
  for (const auto& [addr, fam] : f.assign()) {
    const CnfOrdinal rank = borel_rank(f.tree(), addr);
    for (const auto& s : fam)
      if (cmp(s.level(), rank) == Ordering::GT) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Transformations

namespace detail {

template <class Fn>
Flowchart map_sets(const Flowchart& f, Space space, Fn&& fn) {
  Flowchart::Assignment out;
  for (const auto& [addr, fam] : f.assign()) {
    Family g;
    g.reserve(fam.size());
    for (const auto& s : fam) g.push_back(fn(addr, s));
    out.emplace(addr, std::move(g));
  }
  return Flowchart(f.term(), space, std::move(out), f.alphabet());
}

}  // namespace detail

/// Intersects every assigned set with its node's domain.
inline Flowchart to_monotone(const Flowchart& f) {
  if (!is_normal(f.term())) throw Error(ErrorKind::NonNormal, "monotone transform needs a normal term");
  const auto d = domain_assignment(f);
  return detail::map_sets(f, f.space(), [&](const Address& a, const ClopenSet& s) { return intersect(d.at(a), s); });
}

namespace detail {

// Points with a true path through the subtree at each node, counted from
// that node on, whatever happened above it.
inline DomainAssignment live_sets(const Flowchart& f) {
  DomainAssignment live;
  const ClopenSet full = ClopenSet::full(f.space());
  auto go = [&](auto&& self, const Address& at) -> ClopenSet {
    const NodeLabel& lab = f.tree().label(at);
    const std::size_t m = f.tree().child_count(at);
    std::vector<ClopenSet> kids;
    for (std::size_t n = 0; n < m; ++n) kids.push_back(self(self, child_address(at, n)));
    ClopenSet here = full;
    if (lab.kind == TermKind::Arrow) {
      const ClopenSet& s = f.test(at);
      here = set_union(difference(kids[0], s), intersect(kids[1], s));
    } else if (lab.kind == TermKind::Join) {
      here = ClopenSet::empty(f.space());
      for (std::size_t n = 0; n < m; ++n) here = set_union(here, intersect(f.family(at)[n], kids[n]));
    } else if (lab.kind == TermKind::Veblen) {
      here = kids[0];
    }
    live.emplace(at, here);
    return here;
  };
  go(go, Address{});
  return live;
}

}  // namespace detail

/// Disjoint refinement of every join family with the same union. A point
/// goes to the first member whose branch still has a true path for it, and
/// otherwise to the first member containing it; when every branch is live
/// this is R*_n = R_n minus the earlier members. Each member keeps its
/// declared level.
inline Flowchart to_reduced(const Flowchart& f) {
  const auto live = detail::live_sets(f);
  Flowchart::Assignment out;
  for (const auto& [addr, fam] : f.assign()) {
    if (f.tree().label(addr).kind != TermKind::Join) {
      out.emplace(addr, fam);
      continue;
    }
    ClopenSet any_live = ClopenSet::empty(f.space());
    for (std::size_t n = 0; n < fam.size(); ++n) any_live = set_union(any_live, intersect(fam[n], live.at(child_address(addr, n))));
    Family g;
    ClopenSet seen_live = ClopenSet::empty(f.space()), seen = ClopenSet::empty(f.space());
    for (std::size_t n = 0; n < fam.size(); ++n) {
      const ClopenSet l = intersect(fam[n], live.at(child_address(addr, n)));
      const ClopenSet dead = difference(difference(fam[n], any_live), seen);
      g.push_back(set_union(difference(l, seen_live), dead).with_level(fam[n].level()));
      seen_live = set_union(seen_live, l);
      seen = set_union(seen, fam[n]);
    }
    out.emplace(addr, std::move(g));
  }
  return Flowchart(f.term(), f.space(), std::move(out), f.alphabet());
}

/// Substitutes theta: eval(pullback(F, theta), x) = eval(F, theta(x)).
inline Flowchart pullback(const Flowchart& f, const ContinuousMap& theta) {
  require_same_space(theta.output_space(), f.space(), "pullback");
  return detail::map_sets(f, theta.input_space(), [&](const Address&, const ClopenSet& s) { return preimage(theta, s); });
}

/// Vaught transform along an open surjection delta from the name space of F.
/// For clopen A the transformed set is the direct image delta[A].
inline Flowchart vaught_transform(const Flowchart& f, const ContinuousMap& delta, std::size_t depth_bound) {
  require_same_space(delta.input_space(), f.space(), "vaught transform");
  if (auto m = is_monotone(f); !m)
    throw Error(ErrorKind::NonMonotone, "set at " + render_address(*m.at) + " leaves its domain (point " +
                                            render_point(*m.witness) + ")");
  if (!image(delta, ClopenSet::full(f.space()), depth_bound).is_full())
    throw Error(ErrorKind::Precondition, "map is not onto its output space");
  return detail::map_sets(f, delta.output_space(),
                          [&](const Address&, const ClopenSet& s) { return image(delta, s, depth_bound); });
}

}  // namespace wadge

#endif  // WADGE_FLOWCHART_HPP
