#ifndef WADGE_ORDINAL_HPP
#define WADGE_ORDINAL_HPP

#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wadge/detail/cursor.hpp"

namespace wadge {

using Natural = boost::multiprecision::cpp_int;

struct CnfTerm;

/// An ordinal below epsilon_0 in Cantor normal form:
///   w^e0 * c0 + w^e1 * c1 + ... with e0 > e1 > ... and every c >= 1.
/// The empty sum is 0. Values are always stored canonically.
class CnfOrdinal {
 public:
  CnfOrdinal() = default;
  CnfOrdinal(Natural n);  // NOLINT(google-explicit-constructor): finite ordinals read naturally
  CnfOrdinal(int n) : CnfOrdinal(Natural(n)) {}  // NOLINT(google-explicit-constructor)

  /// Normalizing constructor: interprets the list as the ordinal sum of its
  /// summands in order, so non-canonical input collapses to its value.
  static CnfOrdinal from_terms(std::span<const CnfTerm> summands);

  static CnfOrdinal omega();

  const std::vector<CnfTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  /// Only meaningful for finite ordinals.
  Natural finite_value() const;

  friend std::strong_ordering operator<=>(const CnfOrdinal& a, const CnfOrdinal& b);
  friend bool operator==(const CnfOrdinal& a, const CnfOrdinal& b);

 private:
  std::vector<CnfTerm> terms_;
};

struct CnfTerm {
  CnfOrdinal exponent;
  Natural coefficient;

  friend bool operator==(const CnfTerm& a, const CnfTerm& b) {
    return a.coefficient == b.coefficient && a.exponent == b.exponent;
  }
};

enum class Ordering { LT, EQ, GT };

inline Ordering cmp(const CnfOrdinal& a, const CnfOrdinal& b);
inline CnfOrdinal add(const CnfOrdinal& a, const CnfOrdinal& b);
inline CnfOrdinal omega_pow(const CnfOrdinal& a);
/// 1 + w^a0 + ... + w^al, the rank of a node below Veblen symbols a0..al.
inline CnfOrdinal rank_sum(std::span<const CnfOrdinal> alphas);
inline CnfOrdinal rank_sum(std::initializer_list<CnfOrdinal> alphas) {
  return rank_sum(std::span<const CnfOrdinal>(alphas.begin(), alphas.size()));
}
inline CnfOrdinal parse_ordinal(std::string_view text);
inline std::string render_ordinal(const CnfOrdinal& a);

// ---------------------------------------------------------------------------

inline CnfOrdinal::CnfOrdinal(Natural n) {
  if (n < 0) throw Error(ErrorKind::Malformed, "negative ordinal");
  if (n > 0) terms_.push_back(CnfTerm{CnfOrdinal{}, std::move(n)});
}

inline CnfOrdinal CnfOrdinal::omega() { return omega_pow(CnfOrdinal(1)); }

inline bool CnfOrdinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

inline Natural CnfOrdinal::finite_value() const { return terms_.empty() ? Natural(0) : terms_[0].coefficient; }

inline std::strong_ordering operator<=>(const CnfOrdinal& a, const CnfOrdinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (a.terms_[i].coefficient != b.terms_[i].coefficient)
      return a.terms_[i].coefficient < b.terms_[i].coefficient ? std::strong_ordering::less
                                                                : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

inline bool operator==(const CnfOrdinal& a, const CnfOrdinal& b) { return a.terms_ == b.terms_; }

inline Ordering cmp(const CnfOrdinal& a, const CnfOrdinal& b) {
  auto c = a <=> b;
  if (c < 0) return Ordering::LT;
  if (c > 0) return Ordering::GT;
  return Ordering::EQ;
}

inline CnfOrdinal add(const CnfOrdinal& a, const CnfOrdinal& b) {
  std::vector<CnfTerm> summands = a.terms();
  summands.insert(summands.end(), b.terms().begin(), b.terms().end());
  return CnfOrdinal::from_terms(summands);
}

inline CnfOrdinal CnfOrdinal::from_terms(std::span<const CnfTerm> summands) {
  CnfOrdinal acc;
  for (const auto& s : summands) {
    if (s.coefficient < 0) throw Error(ErrorKind::Malformed, "negative coefficient");
    if (s.coefficient == 0) continue;
    // Strictly below the current tail: append as is.
    if (acc.terms_.empty() || acc.terms_.back().exponent > s.exponent) {
      acc.terms_.push_back(s);
      continue;
    }
    std::vector<CnfTerm> kept;
    for (auto& t : acc.terms_) {
      if (t.exponent > s.exponent) {
        kept.push_back(std::move(t));
      } else if (t.exponent == s.exponent) {
        kept.push_back(CnfTerm{s.exponent, t.coefficient + s.coefficient});
      }
    }
    if (kept.empty() || kept.back().exponent != s.exponent) kept.push_back(s);
    acc.terms_ = std::move(kept);
  }
  return acc;
}

inline CnfOrdinal omega_pow(const CnfOrdinal& a) {
  CnfTerm t{a, 1};
  return CnfOrdinal::from_terms(std::span<const CnfTerm>(&t, 1));
}

inline CnfOrdinal rank_sum(std::span<const CnfOrdinal> alphas) {
  CnfOrdinal r(1);
  for (const auto& a : alphas) r = add(r, omega_pow(a));
  return r;
}

inline std::string render_ordinal(const CnfOrdinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& t : a.terms()) {
    if (!out.empty()) out += " + ";
    if (t.exponent.is_zero()) {
      out += t.coefficient.str();
      continue;
    }
    out += "w";
    if (t.exponent.is_finite()) {
      if (t.exponent.finite_value() != 1) out += "^" + t.exponent.finite_value().str();
    } else {
      out += "^(" + render_ordinal(t.exponent) + ")";
    }
    if (t.coefficient != 1) out += "*" + t.coefficient.str();
  }
  return out;
}

namespace detail {

inline CnfOrdinal parse_ordinal_sum(Cursor& in);

inline CnfOrdinal parse_ordinal_prod(Cursor& in) {
  in.skip_ws();
  if (in.accept('w')) {
    CnfOrdinal exponent(1);
    if (in.accept('^')) {
      if (in.accept('(')) {
        exponent = parse_ordinal_sum(in);
        in.expect(')');
      } else {
        exponent = CnfOrdinal(Natural(in.digits()));
      }
    }
    Natural coefficient = 1;
    if (in.accept('*')) {
      coefficient = Natural(in.digits());
      if (coefficient == 0) in.fail("coefficient must be positive");
    }
    CnfTerm t{exponent, coefficient};
    return CnfOrdinal::from_terms(std::span<const CnfTerm>(&t, 1));
  }
  if (in.at_digit()) return CnfOrdinal(Natural(in.digits()));
  in.fail("expected 'w' or a natural number");
}

inline CnfOrdinal parse_ordinal_sum(Cursor& in) {
  CnfOrdinal acc = parse_ordinal_prod(in);
  while (in.accept('+')) acc = add(acc, parse_ordinal_prod(in));
  return acc;
}

}  // namespace detail

inline CnfOrdinal parse_ordinal(std::string_view text) {
  detail::Cursor in(text);
  CnfOrdinal r = detail::parse_ordinal_sum(in);
  in.expect_end();
  return r;
}

}  // namespace wadge

#endif  // WADGE_ORDINAL_HPP
