#include "ucyc/klr.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ucyc {

Poly Poly::monomial(std::vector<int> exps, const Scalar& c) {
  Poly p(static_cast<int>(exps.size()));
  p.add(exps, c);
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void Poly::add(const std::vector<int>& exps, const Scalar& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(exps.size()) != n_) throw KlrError("variable count mismatch");
  auto [it, fresh] = terms_.emplace(exps, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.n_ != n_ && !o.terms_.empty()) {
    if (!terms_.empty()) throw KlrError("variable count mismatch");
    n_ = o.n_;
  }
  for (const auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  return r += o;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Scalar(-1); }

Poly Poly::operator*(const Poly& o) const {
  Poly r(n_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      std::vector<int> e(n_);
      for (int k = 0; k < n_; ++k) e[k] = a[k] + b[k];
      r.add(e, ca * cb);
    }
  return r;
}

Poly Poly::operator*(const Scalar& c) const {
  Poly r(n_);
  for (const auto& [e, x] : terms_) r.add(e, x * c);
  return r;
}

Poly Poly::times_var(int k, int power) const {
  Poly r(n_);
  for (const auto& [e0, c] : terms_) {
    std::vector<int> e = e0;
    e[k] += power;
    r.add(e, c);
  }
  return r;
}

Poly Poly::swapped(int k) const {
  Poly r(n_);
  for (const auto& [e0, c] : terms_) {
    std::vector<int> e = e0;
    std::swap(e[k], e[k + 1]);
    r.add(e, c);
  }
  return r;
}

Poly Poly::divided_difference(int k) const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    int a = e[k], b = e[k + 1];
    if (a == b) continue;
    // x^a y^b - x^b y^a = sign (xy)^lo (x^d - y^d), d = |a-b|
    int lo = std::min(a, b), d = std::abs(a - b);
    Scalar s = a > b ? c : c * Scalar(-1);
    for (int t = 0; t < d; ++t) {
      std::vector<int> f = e;
      f[k] = lo + d - 1 - t;
      f[k + 1] = lo + t;
      r.add(f, s);
    }
  }
  return r;
}

std::string Poly::render() const {
  if (terms_.empty()) return "0";
  std::ostringstream o;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    o << (first ? "" : " + ") << "(" << c.render() << ")";
    for (int k = 0; k < n_; ++k)
      if (e[k]) o << "*x" << k + 1 << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
    first = false;
  }
  return o.str();
}

Poly KlrRep::q_poly(int i, int j, int k, int n) const {
  const CartanDatum& D = params_.datum();
  Poly q(n);
  std::vector<int> e(n, 0);
  if (D.a(i, j) == 0) {
    q.add(e, params_.t(i, j));
    return q;
  }
  auto mono = [&](int p, int r) {
    std::vector<int> f(n, 0);
    f[k] = p;
    f[k + 1] = r;
    return f;
  };
  q.add(mono(D.dij(i, j), 0), params_.t(i, j));
  q.add(mono(0, D.dij(j, i)), params_.t(j, i));
  for (int p = 0; p < D.dij(i, j); ++p)
    for (int r = 0; r < D.dij(j, i); ++r)
      if (D.s_admissible(i, j, p, r)) q.add(mono(p, r), params_.s(i, j, p, r));
  return q;
}

Poly KlrRep::act(const Diagram& d, const Poly& f0) const {
  if (!d.is_upward()) throw KlrError("the representation only takes upward diagrams");
  const int n = static_cast<int>(d.source().seq.size());
  std::vector<int> colors;
  for (const Strand& s : d.source().seq) colors.push_back(s.color);
  Poly f = f0;
  for (const Generator& g : d.gens()) {
    const int k = g.pos;
    if (g.kind == Gen::Dot) {
      f = f.times_var(k);
      continue;
    }
    int a = colors[k], b = colors[k + 1];
    if (a == b) {
      f = f.divided_difference(k);
    } else if (a < b) {
      f = f.swapped(k);
    } else {
      f = q_poly(b, a, k, n) * f.swapped(k);
    }
    std::swap(colors[k], colors[k + 1]);
  }
  return f;
}

PolyState KlrRep::act(const Diagram& d, const PolyState& s) const {
  PolyState out;
  std::vector<int> bottom, top;
  for (const Strand& x : d.source().seq) bottom.push_back(x.color);
  for (const Strand& x : d.target().seq) top.push_back(x.color);
  auto it = s.find(bottom);
  if (it != s.end()) out[top] = act(d, it->second);
  return out;
}

int KlrRep::default_bound(const CartanDatum& datum, const Morphism& a, const Morphism& b) {
  int maxd = 1;
  for (int i = 0; i < datum.rank(); ++i)
    for (int j = 0; j < datum.rank(); ++j) maxd = std::max(maxd, datum.dij(i, j));
  int dots = 0;
  for (const Morphism* m : {&a, &b})
    for (const auto& [d, c] : m->terms()) {
      int k = 0;
      for (const Generator& g : d.gens()) k += g.kind == Gen::Dot;
      dots = std::max(dots, k);
    }
  int n = static_cast<int>(a.source().seq.size());
  return dots + n * (n - 1) / 2 * maxd + 1;
}

bool KlrRep::equal(const Morphism& a, const Morphism& b, int bound) const {
  if (!(a.source() == b.source()) || !(a.target() == b.target())) throw KlrError("morphisms are not parallel");
  if (!is_upward_morphism(a) || !is_upward_morphism(b)) throw KlrError("the representation only takes upward diagrams");
  const int n = static_cast<int>(a.source().seq.size());
  Morphism diff = a - b;
  bool ok = true;
  std::vector<int> e(n, 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (!ok) return;
    if (k == n) {
      Poly f = Poly::monomial(e);
      Poly r(n);
      for (const auto& [d, c] : diff.terms()) r += act(d, f) * c;
      if (!r.is_zero()) ok = false;
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[k] = x;
      rec(k + 1, left - x);
    }
    e[k] = 0;
  };
  rec(0, bound);
  return ok;
}

bool is_upward_morphism(const Morphism& m) {
  for (const Strand& s : m.source().seq)
    if (s.sign < 0) return false;
  for (const auto& [d, c] : m.terms())
    if (!d.is_upward()) return false;
  return true;
}

bool oracle_equal(const Parameters& params, const Morphism& a, const Morphism& b, int degree_bound) {
  KlrRep rep(params);
  if (degree_bound < 0) degree_bound = KlrRep::default_bound(params.datum(), a, b);
  return rep.equal(a, b, degree_bound);
}

}  // namespace ucyc
