#include "ucyc/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ucyc {

std::string render_rational(const Rational& r) { return r.get_str(); }

std::string Symbol::render() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::T:
      os << "t(" << a << "," << b << ")";
      break;
    case Kind::S:
      os << "s(" << a << "," << b << ";" << p << "," << q << ")";
      break;
    case Kind::C:
      os << "c(" << a << "," << b << ")";
      break;
  }
  return os.str();
}

Monomial::Monomial(Symbol s, int exp) {
  if (exp != 0) factors_.emplace_back(s, exp);
}

int Monomial::exponent(const Symbol& s) const {
  for (const auto& [sym, e] : factors_)
    if (sym == s) return e;
  return 0;
}

bool Monomial::has_polynomial_symbols() const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [](const auto& f) { return !f.first.invertible(); });
}

int Monomial::polynomial_degree() const {
  int d = 0;
  for (const auto& [sym, e] : factors_)
    if (!sym.invertible()) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial out;
  auto& f = out.factors_;
  f.reserve(factors_.size() + o.factors_.size());
  auto i = factors_.begin();
  auto j = o.factors_.begin();
  while (i != factors_.end() || j != o.factors_.end()) {
    if (j == o.factors_.end() || (i != factors_.end() && i->first < j->first)) {
      f.push_back(*i++);
    } else if (i == factors_.end() || j->first < i->first) {
      f.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0) f.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial Monomial::inverse() const {
  Monomial out = *this;
  for (auto& f : out.factors_) f.second = -f.second;
  return out;
}

std::string Monomial::render() const {
  std::string out;
  for (const auto& [sym, e] : factors_) {
    if (!out.empty()) out += "*";
    out += sym.render();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

Scalar::Scalar(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c != 0) terms_.emplace(Monomial(), c);
}

Scalar::Scalar(Symbol s, int exp) {
  if (exp < 0 && !s.invertible())
    throw ScalarError("negative exponent on non-invertible symbol " + s.render());
  terms_.emplace(Monomial(s, exp), Rational(1));
}

Scalar::Scalar(const Monomial& m, const Rational& coeff) {
  Rational c = coeff;
  c.canonicalize();
  if (c != 0) terms_.emplace(m, c);
}

void Scalar::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Scalar::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second == 1;
}

bool Scalar::is_unit() const {
  return terms_.size() == 1 && !terms_.begin()->first.has_polynomial_symbols();
}

std::optional<Scalar> Scalar::try_invert() const {
  if (!is_unit()) return std::nullopt;
  const auto& [m, c] = *terms_.begin();
  return Scalar(m.inverse(), Rational(1) / c);
}

Scalar Scalar::inverse() const {
  auto inv = try_invert();
  if (!inv) throw ScalarError("not a unit: " + render());
  return *inv;
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar result = one();
  Scalar base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::optional<Rational> Scalar::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  *this = *this * o;
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Rational Scalar::substitute(const std::map<Symbol, Rational>& assignment) const {
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (const auto& [sym, e] : m.factors()) {
      auto it = assignment.find(sym);
      if (it == assignment.end()) throw ScalarError("unassigned symbol " + sym.render());
      const Rational& x = it->second;
      if (sym.invertible() && x == 0)
        throw ScalarError("zero assigned to invertible symbol " + sym.render());
      Rational pw = 1;
      for (int k = 0; k < std::abs(e); ++k) pw *= x;
      v *= (e < 0) ? Rational(1) / pw : pw;
    }
    total += v;
  }
  return total;
}

std::string Scalar::render() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += render_rational(mag);
    } else {
      if (mag != 1) out += render_rational(mag) + "*";
      out += m.render();
    }
  }
  return out;
}

ScalarParser::ScalarParser(std::string_view s, std::size_t pos) : s_(s), pos_(pos) {}

Scalar ScalarParser::parse_all() {
  Scalar out = parse_sum();
  skip_ws();
  if (pos_ != s_.size()) fail("unexpected character");
  return out;
}

void ScalarParser::fail(const std::string& what) const {
  throw ScalarError("scalar parse error at column " + std::to_string(pos_ + 1) + ": " + what);
}

void ScalarParser::skip_ws() {
  while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
}

bool ScalarParser::eat(char ch) {
  skip_ws();
  if (pos_ < s_.size() && s_[pos_] == ch) {
    ++pos_;
    return true;
  }
  return false;
}

void ScalarParser::expect(char ch) {
  if (!eat(ch)) fail(std::string("expected '") + ch + "'");
}

long ScalarParser::parse_int() {
  skip_ws();
  bool neg = false;
  if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
  std::size_t start = pos_;
  while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  if (start == pos_) fail("expected integer");
  long v = std::stol(std::string(s_.substr(start, pos_ - start)));
  return neg ? -v : v;
}

bool ScalarParser::at_factor_start() {
  skip_ws();
  if (pos_ >= s_.size()) return false;
  char ch = s_[pos_];
  if (ch == '(' || std::isdigit(static_cast<unsigned char>(ch))) return true;
  if ((ch == 't' || ch == 's' || ch == 'c') && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') return true;
  return false;
}

Scalar ScalarParser::parse_sum() {
  skip_ws();
  Scalar total;
  bool neg = false;
  if (eat('-')) neg = true;
  else eat('+');
  Scalar t = parse_product();
  total += neg ? -t : t;
  for (;;) {
    if (eat('+')) {
      total += parse_product();
    } else if (eat('-')) {
      total -= parse_product();
    } else {
      break;
    }
  }
  return total;
}

Scalar ScalarParser::parse_product() {
  Scalar out = parse_factor();
  while (eat('*')) out *= parse_factor();
  return out;
}

Scalar ScalarParser::parse_factor() {
  skip_ws();
  if (pos_ >= s_.size()) fail("unexpected end");
  char ch = s_[pos_];
  Scalar base;
  if (ch == '(') {
    ++pos_;
    base = parse_sum();
    expect(')');
  } else if (std::isdigit(static_cast<unsigned char>(ch))) {
    long num = parse_int();
    Rational r(num);
    std::size_t save = pos_;
    if (eat('/')) {
      skip_ws();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        long den = parse_int();
        if (den == 0) fail("zero denominator");
        r /= Rational(den);
      } else {
        pos_ = save;
      }
    }
    base = Scalar(r);
  } else if (ch == 't' || ch == 's' || ch == 'c') {
    ++pos_;
    expect('(');
    int a = static_cast<int>(parse_int());
    if (ch == 's') {
      expect(',');
      int b = static_cast<int>(parse_int());
      expect(';');
      int p = static_cast<int>(parse_int());
      expect(',');
      int q = static_cast<int>(parse_int());
      expect(')');
      base = Scalar(Symbol::s(a, b, p, q));
    } else {
      expect(',');
      int b = static_cast<int>(parse_int());
      expect(')');
      base = Scalar(ch == 't' ? Symbol::t(a, b) : Symbol::c(a, b));
    }
  } else {
    fail(std::string("unexpected '") + ch + "'");
  }
  if (eat('^')) {
    int e = static_cast<int>(parse_int());
    base = base.pow(e);
  }
  return base;
}


Scalar Scalar::parse(std::string_view text) { return ScalarParser(text).parse_all(); }

}  // namespace ucyc
