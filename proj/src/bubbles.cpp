#include "ucyc/bubbles.hpp"

#include <algorithm>
#include <functional>

#include "ucyc/text.hpp"

namespace ucyc {

bool canonical_cw(const Weight& w, int i) { return w.pairing(i) >= 1; }

int literal_dots(const Weight& w, int i, bool cw, int m) {
  int n = w.pairing(i);
  return cw ? n - 1 + m : -n - 1 + m;
}

BubbleMonomial multiply(const BubbleMonomial& a, const BubbleMonomial& b) {
  BubbleMonomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

BubblePolynomial BubblePolynomial::constant(const Weight& w, const Scalar& c) {
  BubblePolynomial p(w);
  p.add({}, c);
  return p;
}

BubblePolynomial BubblePolynomial::symbol(const Weight& w, int i, int m) {
  if (m < 1) throw BubbleError("canonical bubble symbols need m >= 1");
  BubblePolynomial p(w);
  p.add({{i, m}}, Scalar::one());
  return p;
}

bool BubblePolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

void BubblePolynomial::add(const BubbleMonomial& mono, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

BubblePolynomial& BubblePolynomial::operator+=(const BubblePolynomial& o) {
  if (terms_.empty() && !(weight_ == o.weight_)) weight_ = o.weight_;
  for (const auto& [mono, c] : o.terms_) add(mono, c);
  return *this;
}

BubblePolynomial BubblePolynomial::operator+(const BubblePolynomial& o) const {
  BubblePolynomial r = *this;
  r += o;
  return r;
}

BubblePolynomial BubblePolynomial::operator-(const BubblePolynomial& o) const { return *this + o * Scalar(-1); }

BubblePolynomial BubblePolynomial::operator*(const BubblePolynomial& o) const {
  BubblePolynomial r(weight_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add(multiply(ma, mb), ca * cb);
  return r;
}

BubblePolynomial BubblePolynomial::operator*(const Scalar& c) const {
  BubblePolynomial r(weight_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.add(m, v * c);
  return r;
}

int BubblePolynomial::monomial_degree(const CartanDatum& datum, const BubbleMonomial& mono) {
  int deg = 0;
  for (const auto& [i, m] : mono) deg += 2 * datum.d(i) * m;
  return deg;
}

Morphism BubblePolynomial::to_morphism(const CartanDatum& datum) const {
  (void)datum;
  OneMorphism one{{}, weight_, 0};
  Morphism out(one, one);
  for (const auto& [mono, c] : terms_) {
    std::vector<Generator> gens;
    for (const auto& [i, m] : mono) gens.push_back(Generator::bubble(0, i, canonical_cw(weight_, i), m));
    out.add(Diagram(one, gens), c);
  }
  return out;
}

std::string BubblePolynomial::render(const CartanDatum& datum) const { return render_morphism(datum, to_morphism(datum)); }

BubbleCalculus::BubbleCalculus(Parameters params) : params_(std::move(params)) {}

Scalar BubbleCalculus::degree_zero(int i, const Weight& w, bool cw) const {
  auto it = deg0_override_.find({i, w, cw});
  if (it != deg0_override_.end()) return it->second;
  Scalar c = params_.bubble_param(i, w);
  return cw ? c : c.inverse();
}

void BubbleCalculus::override_degree_zero(int i, const Weight& w, bool cw, Scalar v) {
  deg0_override_[{i, w, cw}] = std::move(v);
  memo_.clear();
}

BubblePolynomial BubbleCalculus::bubble(int i, const Weight& w, bool cw, int m) const {
  if (m < 0) return BubblePolynomial(w);
  if (m == 0) return BubblePolynomial::constant(w, degree_zero(i, w, cw));
  bool canon = canonical_cw(w, i);
  if (cw == canon) return BubblePolynomial::symbol(w, i, m);
  auto key = std::make_tuple(i, w, cw, m);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // Grassmannian: sum_{a+b=k} canon(a) other(b) = 0 for k >= 1.
  BubblePolynomial acc(w);
  for (int a = 1; a <= m; ++a) acc += bubble(i, w, canon, a) * bubble(i, w, cw, m - a);
  BubblePolynomial result = acc * (-degree_zero(i, w, canon).inverse());
  memo_.emplace(key, result);
  return result;
}

BubblePolynomial BubbleCalculus::fake_bubble(int i, const Weight& w, bool cw, int m) const {
  if (m < 0) throw BubbleError("fake_bubble needs m >= 0");
  return bubble(i, w, cw, m);
}

BubblePolynomial BubbleCalculus::fake_by_definition(int i, const Weight& w, bool cw, int m) const {
  if (m < 0) return BubblePolynomial(w);
  if (m == 0) return BubblePolynomial::constant(w, degree_zero(i, w, cw));
  if (literal_dots(w, i, cw, m) >= 0) return bubble(i, w, cw, m);
  int n = w.pairing(i);
  Scalar c = params_.bubble_param(i, w);
  BubblePolynomial acc(w);
  if (cw) {
    // <i,w> < 0: clockwise fakes through real counterclockwise bubbles
    for (int b = 1; b <= m; ++b) acc += fake_by_definition(i, w, true, m - b) * bubble(i, w, false, b);
    return acc * (-c);
  }
  (void)n;
  for (int a = 1; a <= m; ++a) acc += bubble(i, w, true, a) * fake_by_definition(i, w, false, m - a);
  return acc * (-c.inverse());
}

bool BubbleCalculus::grassmannian_check(int i, const Weight& w, int N) const {
  for (int k = 0; k <= N; ++k) {
    BubblePolynomial acc(w);
    for (int a = 0; a <= k; ++a) acc += fake_by_definition(i, w, true, a) * fake_by_definition(i, w, false, k - a);
    BubblePolynomial expect = k == 0 ? BubblePolynomial::constant(w, Scalar::one()) : BubblePolynomial(w);
    if (!(acc == expect)) return false;
  }
  return true;
}

namespace {

DotPolynomial dot_mul(const DotPolynomial& a, const DotPolynomial& b) {
  DotPolynomial out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Scalar v = ca * cb;
      if (v.is_zero()) continue;
      auto [it, ins] = out.emplace(ea + eb, v);
      if (!ins) {
        it->second += v;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  return out;
}

void dot_add(DotPolynomial& a, const DotPolynomial& b, const Scalar& scale) {
  for (const auto& [e, c] : b) {
    Scalar v = c * scale;
    if (v.is_zero()) continue;
    auto [it, ins] = a.emplace(e, v);
    if (!ins) {
      it->second += v;
      if (it->second.is_zero()) a.erase(it);
    }
  }
}

Rational binomial(int n, int k) {
  Rational r(1);
  for (int x = 1; x <= k; ++x) r = r * Rational(n - k + x) / Rational(x);
  return r;
}

}  // namespace

std::vector<DotPolynomial> BubbleCalculus::slide_series(int i, int j, bool expanded, int order) const {
  const CartanDatum& D = datum();
  std::vector<DotPolynomial> p(order + 1);
  auto put = [&](int k, int e, const Scalar& c) {
    if (k > order || c.is_zero()) return;
    dot_add(p[k], DotPolynomial{{e, c}}, Scalar::one());
  };
  if (i == j) {
    // 1 / (1 - u x)^2
    for (int k = 0; k <= order; ++k) put(k, k, Scalar(Rational(k + 1)));
  } else {
    put(0, 0, params_.t(i, j));
    if (D.a(i, j) < 0) {
      int dij = D.dij(i, j), dji = D.dij(j, i);
      put(dij, dji, params_.t(j, i));
      for (int pp = 0; pp < dij; ++pp)
        for (int qq = 0; qq < dji; ++qq)
          if (D.s_admissible(i, j, pp, qq)) put(dij - pp, qq, params_.s(i, j, pp, qq));
    }
  }
  if (expanded) return p;
  std::vector<DotPolynomial> q(order + 1);
  if (p[0].size() != 1 || p[0].begin()->first != 0) throw BubbleError("slide series has no invertible constant term");
  Scalar inv0 = p[0].begin()->second.inverse();
  q[0] = DotPolynomial{{0, inv0}};
  for (int k = 1; k <= order; ++k) {
    DotPolynomial acc;
    for (int l = 1; l <= k; ++l) dot_add(acc, dot_mul(p[l], q[k - l]), Scalar::one());
    dot_add(q[k], acc, -inv0);
  }
  return q;
}

std::vector<SlideTerm> BubbleCalculus::slide_terms(int i, int j, bool cw, int m, bool on_right) const {
  std::vector<SlideTerm> out;
  if (m < 0) return out;
  auto g = slide_series(i, j, slide_is_expanded(cw, on_right), m);
  for (int k = 0; k <= m; ++k)
    for (const auto& [e, c] : g[k]) out.push_back({c, m - k, e});
  return out;
}

std::vector<SlideTerm> BubbleCalculus::inverted_slide_displayed(int i, int j, bool cw, int m) const {
  (void)cw;
  const CartanDatum& D = datum();
  std::vector<SlideTerm> out;
  if (i == j) {
    out.push_back({Scalar::one(), m, 0});
    out.push_back({Scalar(-2), m - 1, 1});
    out.push_back({Scalar::one(), m - 2, 2});
  } else if (D.a(i, j) == 0) {
    out.push_back({params_.t(i, j).inverse(), m, 0});
  } else {
    int dij = D.dij(i, j), dji = D.dij(j, i);
    std::vector<std::pair<int, int>> s_pairs;  // (p, q) with p on the strand
    for (int pp = 0; pp < dji; ++pp)
      for (int qq = 0; qq < dij; ++qq)
        if (D.s_admissible(j, i, pp, qq) && !params_.s(j, i, pp, qq).is_zero()) {
          if (dij - qq <= 0) throw BubbleError("inverted slide does not terminate");
          s_pairs.emplace_back(pp, qq);
        }
    Scalar tij = params_.t(i, j), tji = params_.t(j, i);
    for (int f = 0; f * dij <= m; ++f) {
      // enumerate ordered k-tuples of s-pairs by recursion
      std::function<void(int, int, int, Scalar)> rec = [&](int k, int sum_p, int sum_q, Scalar prod) {
        int label = m - (f + k) * dij + sum_q;
        if (label < 0) return;
        Scalar coeff = Scalar(-binomial(f + k, k)) * (Scalar(-1) * tij.inverse() * tji).pow(f) *
                       (Scalar(-1) * tij).pow(-(k + 1)) * prod;
        out.push_back({coeff, label, f * dji + sum_p});
        for (const auto& [pp, qq] : s_pairs) rec(k + 1, sum_p + pp, sum_q + qq, prod * params_.s(j, i, pp, qq));
      };
      rec(0, 0, 0, Scalar::one());
    }
  }
  return out;
}

Diagram curl_diagram(const CartanDatum& datum, CurlSide side, int i, const Weight& lambda, int m) {
  Strand up{i, 1}, down{i, -1};
  std::vector<Generator> gens;
  if (side == CurlSide::Left) {
    OneMorphism src{{up}, lambda, 0};
    gens.push_back(Generator::cupcap(Gen::CupPFE, 1, i));
    for (int k = 0; k < m; ++k) gens.push_back(Generator::dot(2, i, -1));
    gens.push_back(crossing_for(0, up, up));
    gens.push_back(Generator::cupcap(Gen::CapCFE, 1, i));
    return Diagram(src, gens);
  }
  OneMorphism src{{up}, lambda.shifted(datum, i, -1), 0};
  gens.push_back(Generator::cupcap(Gen::CupPEF, 0, i));
  for (int k = 0; k < m; ++k) gens.push_back(Generator::dot(0, i, -1));
  gens.push_back(crossing_for(1, up, up));
  gens.push_back(Generator::cupcap(Gen::CapCEF, 0, i));
  (void)down;
  return Diagram(src, gens);
}

Morphism curl_reduce(const CartanDatum& datum, CurlSide side, int i, const Weight& lambda, int m) {
  int n = lambda.pairing(i);
  Strand up{i, 1};
  if (side == CurlSide::Left) {
    OneMorphism src{{up}, lambda, 0};
    Morphism out(src, src);
    for (int f1 = 0; f1 <= m - n; ++f1) {
      int f2 = m - n - f1;
      std::vector<Generator> gens(f1, Generator::dot(0, i, 1));
      gens.push_back(Generator::bubble(1, i, true, f2));
      out.add(Diagram(src, gens), Scalar(-1));
    }
    return out;
  }
  OneMorphism src{{up}, lambda.shifted(datum, i, -1), 0};
  Morphism out(src, src);
  for (int g1 = 0; g1 <= m + n; ++g1) {
    int g2 = m + n - g1;
    std::vector<Generator> gens(g1, Generator::dot(0, i, 1));
    gens.push_back(Generator::bubble(0, i, false, g2));
    out.add(Diagram(src, gens), Scalar::one());
  }
  return out;
}

Diagram bubble_beside_strand(const CartanDatum& datum, int i, int j, const Weight& lambda, bool cw, int m,
                             bool bubble_right, int dots) {
  (void)datum;
  OneMorphism src{{{j, 1}}, lambda, 0};
  std::vector<Generator> gens;
  gens.push_back(Generator::bubble(bubble_right ? 1 : 0, i, cw, m));
  for (int k = 0; k < dots; ++k) gens.push_back(Generator::dot(0, j, 1));
  return Diagram(src, gens).canonical();
}

Morphism bubble_slide(const BubbleCalculus& calc, int i, int j, const Weight& lambda, bool cw, int m, bool from_right,
                      SlideForm form) {
  if (m < 0) throw BubbleError("bubble_slide needs m >= 0");
  bool expanded = BubbleCalculus::slide_is_expanded(cw, from_right);
  if (expanded != (form == SlideForm::Expanded))
    throw BubbleError(std::string("no ") + (form == SlideForm::Expanded ? "expanded" : "inverted") +
                      " slide for this orientation and side");
  const CartanDatum& D = calc.datum();
  OneMorphism src{{{j, 1}}, lambda, 0};
  Morphism out(src, src);
  for (const auto& t : calc.slide_terms(i, j, cw, m, from_right)) {
    if (t.m < 0) continue;
    out.add(bubble_beside_strand(D, i, j, lambda, cw, t.m, !from_right, t.dots), t.coeff);
  }
  return out;
}

}  // namespace ucyc
