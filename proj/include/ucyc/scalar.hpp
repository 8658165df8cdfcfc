#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucyc {

using Rational = mpq_class;

class ScalarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formal parameter symbol. t(a,b) and c(a,k) are invertible, s(a,b;p,q)
/// is polynomial only. Index fields hold the user's color labels.
struct Symbol {
  enum class Kind : std::uint8_t { T = 0, S = 1, C = 2 };
  Kind kind = Kind::T;
  int a = 0;
  int b = 0;
  int p = 0;
  int q = 0;

  static Symbol t(int i, int j) { return {Kind::T, i, j, 0, 0}; }
  /// s_ij^{pq}; stored with a < b using s_ij^{pq} = s_ji^{qp}.
  static Symbol s(int i, int j, int p, int q) {
    if (i > j) return {Kind::S, j, i, q, p};
    return {Kind::S, i, j, p, q};
  }
  static Symbol c(int i, int coset) { return {Kind::C, i, coset, 0, 0}; }

  bool invertible() const { return kind != Kind::S; }
  std::string render() const;

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

/// Sorted (symbol, exponent) list with nonzero exponents.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(Symbol s, int exp = 1);

  const std::vector<std::pair<Symbol, int>>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int exponent(const Symbol& s) const;
  bool has_polynomial_symbols() const;
  /// Total exponent of non-invertible symbols.
  int polynomial_degree() const;

  Monomial operator*(const Monomial& o) const;
  Monomial inverse() const;  // caller checks invertibility
  std::string render() const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

 private:
  std::vector<std::pair<Symbol, int>> factors_;
};

/// Rational-coefficient Laurent polynomial in t/c symbols, polynomial in s.
/// Zero coefficients are never stored, so equality is syntactic.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : Scalar(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& r);               // NOLINT(google-explicit-constructor)
  explicit Scalar(Symbol s, int exp = 1);
  Scalar(const Monomial& m, const Rational& coeff);

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return Scalar(1L); }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  /// Single term with no s-symbols (units of the Laurent ring over Q).
  bool is_unit() const;
  std::optional<Scalar> try_invert() const;
  Scalar inverse() const;  // throws ScalarError("not a unit")
  Scalar pow(int e) const;

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Constant coefficient if the scalar is a plain rational.
  std::optional<Rational> as_rational() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;

  bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
  std::strong_ordering operator<=>(const Scalar& o) const;

  /// Exact evaluation. Every symbol must be assigned; invertible symbols
  /// must not be assigned zero.
  Rational substitute(const std::map<Symbol, Rational>& assignment) const;

  /// Text form, e.g. "3/2*t(1,2)^-1*s(1,2;0,1) - 1".
  std::string render() const;
  static Scalar parse(std::string_view text);

 private:
  void add_term(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

inline std::strong_ordering Scalar::operator<=>(const Scalar& o) const {
  // Lexicographic on (monomial, coefficient) pairs; used only for ordering keys.
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  for (; it != terms_.end() && jt != o.terms_.end(); ++it, ++jt) {
    if (auto c = it->first <=> jt->first; c != 0) return c;
    int r = cmp(it->second, jt->second);
    if (r != 0) return r < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (it == terms_.end() && jt == o.terms_.end()) return std::strong_ordering::equal;
  return it == terms_.end() ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string render_rational(const Rational& r);

/// Recursive-descent reader for the scalar syntax; usable on a prefix of a
/// larger text (the diagram language embeds scalars).
class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s, std::size_t pos = 0);
  Scalar parse_all();
  Scalar parse_sum();
  Scalar parse_product();
  Scalar parse_factor();
  /// Next token begins a number, a parenthesis or a t(/s(/c( symbol.
  bool at_factor_start();
  bool eat(char ch);
  void skip_ws();
  std::size_t pos() const { return pos_; }

 private:
  [[noreturn]] void fail(const std::string& what) const;
  void expect(char ch);
  long parse_int();
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace ucyc
