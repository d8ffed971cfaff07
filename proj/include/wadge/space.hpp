#ifndef WADGE_SPACE_HPP
#define WADGE_SPACE_HPP

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wadge/detail/cursor.hpp"
#include "wadge/error.hpp"
#include "wadge/ordinal.hpp"

namespace wadge {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;

/// The Cantor space k^w of infinite words over the letters 0..k-1.
struct Space {
  std::uint32_t k = 2;

  friend bool operator==(const Space&, const Space&) = default;
};

inline Space make_space(std::int64_t k) {
  if (k < 1) throw Error(ErrorKind::Malformed, "alphabet size must be at least 1");
  return Space{static_cast<std::uint32_t>(k)};
}

inline void require_same_space(const Space& a, const Space& b, std::string_view what) {
  if (!(a == b))
    throw Error(ErrorKind::SpaceMismatch,
                std::string(what) + ": alphabet " + std::to_string(a.k) + " vs " + std::to_string(b.k));
}

inline void check_word(const Space& s, const Word& w) {
  for (Letter c : w)
    if (c >= s.k) throw Error(ErrorKind::SpaceMismatch, "letter " + std::to_string(c) + " outside alphabet " + std::to_string(s.k));
}

inline bool word_is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Letters below 10 print as digits, others as <n>.
inline std::string render_word(const Word& w) {
  std::string out;
  for (Letter c : w) {
    if (c < 10) {
      out.push_back(static_cast<char>('0' + c));
    } else {
      out += "<" + std::to_string(c) + ">";
    }
  }
  return out;
}

namespace detail {

inline bool at_letter(Cursor& in) { return std::isdigit(static_cast<unsigned char>(in.peek())) || in.peek() == '<'; }

inline Letter read_letter(Cursor& in) {
  if (in.peek() == '<') {
    in.get();
    std::string n = in.digits();
    in.expect('>');
    return static_cast<Letter>(std::stoul(n));
  }
  if (!std::isdigit(static_cast<unsigned char>(in.peek()))) in.fail("expected a letter");
  return static_cast<Letter>(in.get() - '0');
}

inline Word read_word(Cursor& in) {
  Word w;
  while (at_letter(in)) w.push_back(read_letter(in));
  return w;
}

}  // namespace detail

/// An ultimately periodic point prefix . period^w, kept canonical: the
/// period is primitive and the prefix is as short as possible.
class UpPoint {
 public:
  UpPoint(Space space, Word prefix, Word period) : space_(space), prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw Error(ErrorKind::Malformed, "period must be nonempty");
    check_word(space_, prefix_);
    check_word(space_, period_);
    canonicalize();
  }

  const Space& space() const { return space_; }
  const Word& prefix() const { return prefix_; }
  const Word& period() const { return period_; }

  Letter at(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return period_[(i - prefix_.size()) % period_.size()];
  }

  Word take(std::size_t n) const {
    Word w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = at(i);
    return w;
  }

  friend bool operator==(const UpPoint&, const UpPoint&) = default;
  friend auto operator<=>(const UpPoint& a, const UpPoint& b) {
    if (auto c = a.prefix_ <=> b.prefix_; c != 0) return c;
    return a.period_ <=> b.period_;
  }

 private:
  void canonicalize() {
    const std::size_t n = period_.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d) continue;
      bool repeats = true;
      for (std::size_t i = d; i < n && repeats; ++i) repeats = period_[i] == period_[i - d];
      if (repeats) {
        period_.resize(d);
        break;
      }
    }
    while (!prefix_.empty() && prefix_.back() == period_.back()) {
      prefix_.pop_back();
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    }
  }

  Space space_;
  Word prefix_;
  Word period_;
};

inline std::string render_point(const UpPoint& x) { return render_word(x.prefix()) + "(" + render_word(x.period()) + ")"; }
inline std::ostream& operator<<(std::ostream& os, const UpPoint& x) { return os << render_point(x); }

/// Point literal `prefix(period)`, e.g. `01(10)` or `(0)`.
inline UpPoint parse_point(std::string_view text, Space space) {
  detail::Cursor in(text);
  in.skip_ws();
  Word prefix = detail::read_word(in);
  in.expect('(');
  in.skip_ws();
  Word period = detail::read_word(in);
  in.expect(')');
  in.expect_end();
  if (period.empty()) throw SyntaxError("empty period", 1, text.size());
  return UpPoint(space, std::move(prefix), std::move(period));
}

/// Every canonical ultimately periodic point with prefix length <= max_prefix
/// and period length in [1, max_period], sorted and deduplicated.
inline std::vector<UpPoint> point_grid(Space space, std::size_t max_prefix, std::size_t max_period) {
  std::set<UpPoint> out;
  auto words_of = [&](std::size_t len) {
    std::vector<Word> ws{Word{}};
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<Word> next;
      for (const auto& w : ws)
        for (Letter c = 0; c < space.k; ++c) next.push_back(concat(w, Word{c}));
      ws = std::move(next);
    }
    return ws;
  };
  for (std::size_t pl = 0; pl <= max_prefix; ++pl)
    for (const auto& p : words_of(pl))
      for (std::size_t ql = 1; ql <= max_period; ++ql)
        for (const auto& q : words_of(ql)) out.insert(UpPoint(space, p, q));
  return {out.begin(), out.end()};
}

/// A clopen subset of k^w as the canonical antichain of its maximal
/// cylinders: pairwise prefix-incomparable, no k complete siblings, sorted.
/// `level` is declared Borel-level metadata; set identity ignores it.
class ClopenSet {
 public:
  explicit ClopenSet(Space space) : space_(space) {}
  ClopenSet(Space space, std::vector<Word> words, CnfOrdinal level = 1) : space_(space), level_(std::move(level)) {
    if (level_ < CnfOrdinal(1)) throw Error(ErrorKind::LevelViolation, "declared level must be at least 1");
    for (const auto& w : words) check_word(space_, w);
    antichain_ = canonical(std::move(words), space_.k);
  }

  static ClopenSet empty(Space s) { return ClopenSet(s); }
  static ClopenSet full(Space s) { return ClopenSet(s, {Word{}}); }
  static ClopenSet cylinder(Space s, Word w) { return ClopenSet(s, {std::move(w)}); }

  const Space& space() const { return space_; }
  const std::vector<Word>& antichain() const { return antichain_; }
  const CnfOrdinal& level() const { return level_; }
  bool is_empty() const { return antichain_.empty(); }
  bool is_full() const { return antichain_.size() == 1 && antichain_[0].empty(); }

  ClopenSet with_level(CnfOrdinal level) const {
    ClopenSet r = *this;
    if (level < CnfOrdinal(1)) throw Error(ErrorKind::LevelViolation, "declared level must be at least 1");
    r.level_ = std::move(level);
    return r;
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& w : antichain_) d = std::max(d, w.size());
    return d;
  }

  /// Structural identity, including the declared level.
  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

  static std::vector<Word> canonical(std::vector<Word> words, std::uint32_t k) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    std::set<Word> kept;
    for (auto& w : words) {
      // sorted order puts a prefix right before its extensions
      if (!kept.empty() && word_is_prefix(*kept.rbegin(), w)) continue;
      bool dominated = false;
      for (std::size_t n = 0; n < w.size() && !dominated; ++n) dominated = kept.count(Word(w.begin(), w.begin() + n)) != 0;
      if (!dominated) kept.insert(std::move(w));
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& w : kept) {
        if (w.empty()) continue;
        Word parent(w.begin(), w.end() - 1);
        bool complete = true;
        for (Letter c = 0; c < k && complete; ++c) complete = kept.count(concat(parent, Word{c})) != 0;
        if (!complete) continue;
        for (Letter c = 0; c < k; ++c) kept.erase(concat(parent, Word{c}));
        kept.insert(std::move(parent));
        changed = true;
        break;
      }
    }
    return {kept.begin(), kept.end()};
  }

 private:
  Space space_;
  std::vector<Word> antichain_;
  CnfOrdinal level_ = 1;
};

inline bool member(const UpPoint& x, const ClopenSet& a) {
  require_same_space(x.space(), a.space(), "member");
  for (const auto& w : a.antichain()) {
    bool match = true;
    for (std::size_t i = 0; i < w.size() && match; ++i) match = x.at(i) == w[i];
    if (match) return true;
  }
  return false;
}

inline ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
  require_same_space(a.space(), b.space(), "union");
  std::vector<Word> ws = a.antichain();
  ws.insert(ws.end(), b.antichain().begin(), b.antichain().end());
  return ClopenSet(a.space(), std::move(ws), std::max(a.level(), b.level()));
}

inline ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) {
  require_same_space(a.space(), b.space(), "intersect");
  std::vector<Word> ws;
  for (const auto& u : a.antichain())
    for (const auto& v : b.antichain()) {
      if (word_is_prefix(u, v)) {
        ws.push_back(v);
      } else if (word_is_prefix(v, u)) {
        ws.push_back(u);
      }
    }
  return ClopenSet(a.space(), std::move(ws), std::max(a.level(), b.level()));
}

namespace detail {

inline void complement_under(const std::vector<Word>& words, const Word& at, std::uint32_t k, std::vector<Word>& out) {
  bool below = false;
  for (const auto& w : words) {
    if (word_is_prefix(w, at)) return;  // [at] is inside the set
    if (word_is_prefix(at, w)) below = true;
  }
  if (!below) {
    out.push_back(at);
    return;
  }
  for (Letter c = 0; c < k; ++c) complement_under(words, concat(at, Word{c}), k, out);
}

}  // namespace detail

inline ClopenSet complement(const ClopenSet& a) {
  std::vector<Word> out;
  detail::complement_under(a.antichain(), Word{}, a.space().k, out);
  return ClopenSet(a.space(), std::move(out), add(a.level(), CnfOrdinal(1)));
}

inline ClopenSet difference(const ClopenSet& a, const ClopenSet& b) {
  require_same_space(a.space(), b.space(), "difference");
  return intersect(a, complement(b));
}

/// Set equality; declared levels are not compared.
inline bool equals(const ClopenSet& a, const ClopenSet& b) {
  require_same_space(a.space(), b.space(), "equals");
  return a.antichain() == b.antichain();
}

inline bool is_subset(const ClopenSet& a, const ClopenSet& b) { return difference(a, b).is_empty(); }

inline bool is_empty(const ClopenSet& a) { return a.is_empty(); }

/// The cylinders e_V(0), e_V(1), ... of V, in lexicographic order.
inline std::vector<Word> enumerate_cylinders(const ClopenSet& v) { return v.antichain(); }

/// {y : w.y in A}.
inline ClopenSet quotient(const ClopenSet& a, const Word& w) {
  std::vector<Word> out;
  for (const auto& u : a.antichain()) {
    if (word_is_prefix(u, w)) return ClopenSet::full(a.space()).with_level(a.level());
    if (word_is_prefix(w, u)) out.emplace_back(u.begin() + static_cast<std::ptrdiff_t>(w.size()), u.end());
  }
  return ClopenSet(a.space(), std::move(out), a.level());
}

/// The lexicographically least point: least antichain word followed by 0^w.
inline UpPoint least_point(const ClopenSet& a) {
  if (a.is_empty()) throw Error(ErrorKind::EmptySet, "no least point of the empty set");
  return UpPoint(a.space(), a.antichain().front(), Word{0});
}

/// `{w1, w2}`; `{}` is empty, `{e}` the full space. Non-unit declared levels
/// are appended as `@ord`.
inline std::string render_set(const ClopenSet& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.antichain().size(); ++i) {
    if (i) out += ", ";
    out += a.antichain()[i].empty() ? "e" : render_word(a.antichain()[i]);
  }
  out += "}";
  if (a.level() != CnfOrdinal(1)) out += "@" + render_ordinal(a.level());
  return out;
}

inline ClopenSet parse_set(std::string_view text, Space space) {
  detail::Cursor in(text);
  in.expect('{');
  std::vector<Word> words;
  if (!in.accept('}')) {
    do {
      in.skip_ws();
      if (in.peek() == 'e') {
        in.get();
        words.push_back(Word{});
      } else {
        Word w = detail::read_word(in);
        if (w.empty()) in.fail("expected a word or 'e'");
        words.push_back(std::move(w));
      }
    } while (in.accept(','));
    in.expect('}');
  }
  CnfOrdinal level = 1;
  if (in.accept('@')) level = detail::parse_ordinal_sum(in);
  in.expect_end();
  return ClopenSet(space, std::move(words), std::move(level));
}

}  // namespace wadge

#endif  // WADGE_SPACE_HPP
