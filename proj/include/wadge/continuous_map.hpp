#ifndef WADGE_CONTINUOUS_MAP_HPP
#define WADGE_CONTINUOUS_MAP_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wadge/error.hpp"
#include "wadge/space.hpp"
#include "wadge/transducer.hpp"

namespace wadge {

enum class MapKind { Identity, Transducer, In, InInverse, Out, DropFirst, Double, Composite };

/// A continuous map between Cantor spaces. Every non-composite form is
/// backed by a productive transducer; the kind and target set are kept so
/// documents can refer to the built-in maps by name.
class ContinuousMap {
 public:
  static ContinuousMap identity(Space s) { return ContinuousMap(MapKind::Identity, std::nullopt, identity_transducer(s)); }
  static ContinuousMap from_transducer(Transducer t) { return ContinuousMap(MapKind::Transducer, std::nullopt, std::move(t)); }
  static ContinuousMap drop_first(Space s);
  static ContinuousMap doubling(Space s);
  static ContinuousMap in_map(const ClopenSet& v);
  static ContinuousMap in_inverse(const ClopenSet& v);
  static ContinuousMap out_map(const ClopenSet& v);
  /// Composite in application order: parts.front() is applied first.
  static ContinuousMap compose(const std::vector<ContinuousMap>& parts);

  MapKind kind() const { return kind_; }
  bool is_identity() const { return kind_ == MapKind::Identity; }
  const Space& input_space() const { return in_; }
  const Space& output_space() const { return out_; }
  /// The set an in/in-inverse/out map was built from.
  const std::optional<ClopenSet>& target() const { return target_; }
  const std::vector<ContinuousMap>& parts() const { return parts_; }
  const Transducer& machine() const {
    if (!machine_) throw Error(ErrorKind::Internal, "composite maps have no single machine");
    return *machine_;
  }

  friend bool operator==(const ContinuousMap&, const ContinuousMap&) = default;

 private:
  ContinuousMap(MapKind kind, std::optional<ClopenSet> target, Transducer t)
      : kind_(kind), in_(t.input_space()), out_(t.output_space()), target_(std::move(target)), machine_(std::move(t)) {}
  ContinuousMap(Space in, Space out, std::vector<ContinuousMap> parts)
      : kind_(MapKind::Composite), in_(in), out_(out), parts_(std::move(parts)) {}

  MapKind kind_;
  Space in_;
  Space out_;
  std::optional<ClopenSet> target_;
  std::optional<Transducer> machine_;
  std::vector<ContinuousMap> parts_;
};

/// g after f.
inline ContinuousMap then(const ContinuousMap& f, const ContinuousMap& g) { return ContinuousMap::compose({f, g}); }

inline UpPoint apply(const ContinuousMap& f, const UpPoint& x) {
  require_same_space(f.input_space(), x.space(), "apply");
  if (f.kind() != MapKind::Composite) return apply(f.machine(), x);
  UpPoint y = x;
  for (const auto& p : f.parts()) y = apply(p, y);
  return y;
}

inline ClopenSet preimage(const ContinuousMap& f, const ClopenSet& a) {
  require_same_space(f.output_space(), a.space(), "preimage");
  if (f.is_identity()) return a;
  if (f.kind() != MapKind::Composite) return preimage(f.machine(), a);
  ClopenSet r = a;
  for (auto it = f.parts().rbegin(); it != f.parts().rend(); ++it) r = preimage(*it, r);
  return r;
}

inline ClopenSet image(const ContinuousMap& f, const ClopenSet& a, std::size_t depth_bound) {
  require_same_space(f.input_space(), a.space(), "image");
  if (f.is_identity()) return a;
  if (f.kind() != MapKind::Composite) return image(f.machine(), a, depth_bound);
  ClopenSet r = a;
  for (const auto& p : f.parts()) r = image(p, r, depth_bound);
  return r;
}

// ---------------------------------------------------------------------------

namespace detail {

// Incrementally numbered transducer states keyed by the buffered input word.
struct StateTable {
  std::map<Word, std::size_t> ids;
  std::vector<std::vector<Edge>> rows;

  std::size_t id(const Word& w) {
    auto [it, fresh] = ids.emplace(w, rows.size());
    if (fresh) rows.emplace_back();
    return it->second;
  }
};

/// The complete prefix code of size m over k letters obtained by repeatedly
/// splitting the greatest word. Exists iff m = 1 (mod k-1).
inline std::vector<Word> index_code(std::size_t m, std::uint32_t k) {
  if (m == 0) throw Error(ErrorKind::EmptySet, "no index code for an empty family");
  if (k == 1) {
    if (m != 1) throw Error(ErrorKind::Unsupported, "a one-letter space has a single cylinder");
    return {Word{}};
  }
  if ((m - 1) % (k - 1) != 0)
    throw Error(ErrorKind::Unsupported, "no cylinder-wise homeomorphism onto " + std::to_string(m) +
                                            " cylinders over " + std::to_string(k) + " letters");
  std::vector<Word> code{Word{}};
  while (code.size() < m) {
    Word last = code.back();
    code.pop_back();
    for (Letter c = 0; c < k; ++c) code.push_back(concat(last, Word{c}));
  }
  return code;
}

// Reads a prefix code `from` and, on completing from[i], emits to[i] and
// copies the rest. Input that leaves the code emits what it buffered and
// copies the rest.
inline Transducer recode(Space s, const std::vector<Word>& from, const std::vector<Word>& to) {
  StateTable st;
  const std::size_t root = st.id(Word{});
  const std::size_t copy_marker = static_cast<std::size_t>(-1);
  std::vector<Word> pending{Word{}};
  auto code_index = [&](const Word& w) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < from.size(); ++i)
      if (from[i] == w) return i;
    return std::nullopt;
  };
  auto proper_prefix_of_code = [&](const Word& w) {
    for (const auto& c : from)
      if (c.size() > w.size() && word_is_prefix(w, c)) return true;
    return false;
  };
  // BFS over buffered words
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const Word p = pending[i];
    const std::size_t sid = st.id(p);
    st.rows[sid].resize(s.k);
    for (Letter a = 0; a < s.k; ++a) {
      Word q = concat(p, Word{a});
      Word emit;
      if (p.empty() && code_index(Word{})) {
        emit = concat(to[*code_index(Word{})], Word{a});
      } else if (auto idx = code_index(q)) {
        emit = to[*idx];
      } else if (proper_prefix_of_code(q)) {
        const bool fresh = !st.ids.count(q);
        st.rows[sid][a] = Edge{st.id(q), {}};
        st.rows.resize(st.ids.size());
        if (fresh) pending.push_back(q);
        continue;
      } else {
        emit = q;
      }
      st.rows[sid][a] = Edge{copy_marker, std::move(emit)};
    }
  }
  const std::size_t copy = st.rows.size();
  st.rows.emplace_back();
  for (Letter a = 0; a < s.k; ++a) st.rows[copy].push_back(Edge{copy, Word{a}});
  for (auto& row : st.rows)
    for (auto& e : row)
      if (e.to == copy_marker) e.to = copy;
  return Transducer(s, s, root, std::move(st.rows));
}

}  // namespace detail

inline ContinuousMap ContinuousMap::drop_first(Space s) {
  std::vector<Edge> first, rest;
  for (Letter a = 0; a < s.k; ++a) {
    first.push_back(Edge{1, {}});
    rest.push_back(Edge{1, Word{a}});
  }
  return ContinuousMap(MapKind::DropFirst, std::nullopt, Transducer(s, s, 0, {first, rest}));
}

inline ContinuousMap ContinuousMap::doubling(Space s) {
  std::vector<Edge> row;
  for (Letter a = 0; a < s.k; ++a) row.push_back(Edge{0, Word{a, a}});
  return ContinuousMap(MapKind::Double, std::nullopt, Transducer(s, s, 0, {row}));
}

/// Homeomorphism from the whole space onto a nonempty clopen V. The index
/// of the target cylinder e_V(n) is read as the n-th word of a complete
/// prefix code; the remainder is copied verbatim.
inline ContinuousMap ContinuousMap::in_map(const ClopenSet& v) {
  if (v.is_empty()) throw Error(ErrorKind::EmptySet, "in-map of the empty set");
  const auto cylinders = enumerate_cylinders(v);
  const auto code = detail::index_code(cylinders.size(), v.space().k);
  return ContinuousMap(MapKind::In, v, detail::recode(v.space(), code, cylinders));
}

/// Inverse of in_map(V) on V (prefix stripping). Off V it copies its input.
inline ContinuousMap ContinuousMap::in_inverse(const ClopenSet& v) {
  if (v.is_empty()) throw Error(ErrorKind::EmptySet, "in-map inverse of the empty set");
  const auto cylinders = enumerate_cylinders(v);
  const auto code = detail::index_code(cylinders.size(), v.space().k);
  return ContinuousMap(MapKind::InInverse, v, detail::recode(v.space(), cylinders, code));
}

/// Retraction onto the complement C of V: identity on C; a point of V is
/// sent to the least point of C inside the longest cylinder [s] around it
/// that still meets C.
inline ContinuousMap ContinuousMap::out_map(const ClopenSet& v) {
  const Space s = v.space();
  const ClopenSet c = complement(v);
  if (c.is_empty()) throw Error(ErrorKind::EmptySet, "out-map of the full space has no range");
  auto in_v = [&](const Word& w) {
    for (const auto& e : v.antichain())
      if (word_is_prefix(e, w)) return true;
    return false;
  };
  auto inside_c = [&](const Word& w) { return is_subset(ClopenSet::cylinder(s, w), c); };

  detail::StateTable st;
  const std::size_t root = st.id(Word{});
  const std::size_t copy_marker = static_cast<std::size_t>(-1);
  const std::size_t zero_marker = static_cast<std::size_t>(-2);
  if (v.is_empty()) return ContinuousMap(MapKind::Out, v, identity_transducer(s));
  std::vector<Word> pending{Word{}};
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const Word p = pending[i];
    const std::size_t sid = st.id(p);
    st.rows[sid].resize(s.k);
    for (Letter a = 0; a < s.k; ++a) {
      Word q = concat(p, Word{a});
      if (in_v(q)) {
        // p is the longest prefix whose cylinder still meets C
        const ClopenSet local = intersect(c, ClopenSet::cylinder(s, p));
        st.rows[sid][a] = Edge{zero_marker, local.antichain().front()};
      } else if (inside_c(q)) {
        st.rows[sid][a] = Edge{copy_marker, q};
      } else {
        const bool fresh = !st.ids.count(q);
        st.rows[sid][a] = Edge{st.id(q), {}};
        st.rows.resize(st.ids.size());
        if (fresh) pending.push_back(q);
      }
    }
  }
  const std::size_t copy = st.rows.size();
  const std::size_t zero = copy + 1;
  st.rows.emplace_back();
  st.rows.emplace_back();
  for (Letter a = 0; a < s.k; ++a) {
    st.rows[copy].push_back(Edge{copy, Word{a}});
    st.rows[zero].push_back(Edge{zero, Word{0}});
  }
  for (auto& row : st.rows)
    for (auto& e : row) {
      if (e.to == copy_marker) e.to = copy;
      if (e.to == zero_marker) e.to = zero;
    }
  return ContinuousMap(MapKind::Out, v, Transducer(s, s, root, std::move(st.rows)));
}

inline ContinuousMap ContinuousMap::compose(const std::vector<ContinuousMap>& parts) {
  std::vector<ContinuousMap> flat;
  for (const auto& p : parts) {
    if (!flat.empty()) require_same_space(flat.back().output_space(), p.input_space(), "compose");
    if (p.kind() == MapKind::Composite) {
      flat.insert(flat.end(), p.parts().begin(), p.parts().end());
    } else if (!p.is_identity()) {
      flat.push_back(p);
    } else if (flat.empty() && parts.size() == 1) {
      return p;
    }
  }
  if (flat.empty()) {
    if (parts.empty()) throw Error(ErrorKind::Malformed, "empty composite");
    return ContinuousMap::identity(parts.front().input_space());
  }
  if (flat.size() == 1) return flat.front();
  const Space in = flat.front().input_space();
  const Space out = flat.back().output_space();
  return ContinuousMap(in, out, std::move(flat));
}

}  // namespace wadge

#endif  // WADGE_CONTINUOUS_MAP_HPP
