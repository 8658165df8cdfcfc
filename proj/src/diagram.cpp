#include "ucyc/diagram.hpp"

#include <algorithm>

namespace ucyc {

std::string render_seq(const CartanDatum& datum, const Seq& s) {
  std::string out = "(";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ",";
    out += (s[k].sign > 0 ? "+" : "-") + std::to_string(datum.label(s[k].color));
  }
  return out + ")";
}

Weight region_weight(const CartanDatum& datum, const Seq& seq, const Weight& rightmost, int r) {
  Weight w = rightmost;
  for (int l = static_cast<int>(seq.size()) - 1; l >= r; --l) w = w.shifted(datum, seq[l].color, seq[l].sign);
  return w;
}

Weight OneMorphism::region(const CartanDatum& datum, int r) const { return region_weight(datum, seq, weight, r); }

const char* gen_name(Gen g) {
  switch (g) {
    case Gen::Dot: return "dot";
    case Gen::CrossUU: return "cross_uu";
    case Gen::CrossDD: return "cross_dd";
    case Gen::CrossFE: return "cross_fe";
    case Gen::CrossEF: return "cross_ef";
    case Gen::CupPEF: return "cup_pef";
    case Gen::CupPFE: return "cup_pfe";
    case Gen::CapCEF: return "cap_cef";
    case Gen::CapCFE: return "cap_cfe";
    case Gen::Bubble: return "bubble";
  }
  return "?";
}

Seq Generator::inputs() const {
  switch (kind) {
    case Gen::Dot: return {{i, sign}};
    case Gen::CrossUU: return {{i, 1}, {j, 1}};
    case Gen::CrossDD: return {{i, -1}, {j, -1}};
    case Gen::CrossFE: return {{i, -1}, {j, 1}};
    case Gen::CrossEF: return {{i, 1}, {j, -1}};
    case Gen::CapCEF: return {{i, -1}, {i, 1}};
    case Gen::CapCFE: return {{i, 1}, {i, -1}};
    default: return {};
  }
}

Seq Generator::outputs() const {
  switch (kind) {
    case Gen::Dot: return {{i, sign}};
    case Gen::CrossUU: return {{j, 1}, {i, 1}};
    case Gen::CrossDD: return {{j, -1}, {i, -1}};
    case Gen::CrossFE: return {{j, 1}, {i, -1}};
    case Gen::CrossEF: return {{j, -1}, {i, 1}};
    case Gen::CupPEF: return {{i, -1}, {i, 1}};
    case Gen::CupPFE: return {{i, 1}, {i, -1}};
    default: return {};
  }
}

int Generator::in_width() const { return static_cast<int>(inputs().size()); }
int Generator::out_width() const { return static_cast<int>(outputs().size()); }

Generator crossing_for(int pos, Strand a, Strand b) {
  Gen k;
  if (a.sign > 0 && b.sign > 0) k = Gen::CrossUU;
  else if (a.sign < 0 && b.sign < 0) k = Gen::CrossDD;
  else if (a.sign < 0) k = Gen::CrossFE;
  else k = Gen::CrossEF;
  return Generator::cross(k, pos, a.color, b.color);
}

namespace {

Seq apply_gen(const Seq& s, const Generator& g) {
  Seq in = g.inputs();
  int w = static_cast<int>(in.size());
  if (g.pos < 0 || g.pos + w > static_cast<int>(s.size()))
    throw DiagramError(std::string("generator ") + gen_name(g.kind) + " placed outside the strand sequence");
  for (int k = 0; k < w; ++k) {
    if (!(s[g.pos + k] == in[k]))
      throw DiagramError(std::string("boundary mismatch at ") + gen_name(g.kind) + " position " + std::to_string(g.pos));
  }
  Seq out(s.begin(), s.begin() + g.pos);
  Seq o = g.outputs();
  out.insert(out.end(), o.begin(), o.end());
  out.insert(out.end(), s.begin() + g.pos + w, s.end());
  return out;
}

int tie_class(const Generator& g) {
  switch (g.kind) {
    case Gen::CupPEF:
    case Gen::CupPFE: return 0;
    case Gen::Bubble: return 1;
    default: return 2;
  }
}

bool tie_less(const Generator& a, const Generator& b) {
  int ca = tie_class(a), cb = tie_class(b);
  if (ca != cb) return ca < cb;
  Generator x = a, y = b;
  x.pos = y.pos = 0;
  return x < y;
}

}  // namespace

Diagram::Diagram(OneMorphism source, std::vector<Generator> gens) : source_(std::move(source)), gens_(std::move(gens)) {
  check();
  *this = canonical();
}

Diagram Diagram::identity(OneMorphism source) { return Diagram(std::move(source), {}); }

void Diagram::check() const {
  Seq s = source_.seq;
  for (const auto& g : gens_) s = apply_gen(s, g);
}

Seq Diagram::seq_before(int k) const {
  Seq s = source_.seq;
  for (int l = 0; l < k; ++l) s = apply_gen(s, gens_[l]);
  return s;
}

Seq Diagram::target_seq() const { return seq_before(static_cast<int>(gens_.size())); }

OneMorphism Diagram::target() const { return OneMorphism{target_seq(), source_.weight, source_.shift}; }

Weight Diagram::outer_weight(const CartanDatum& datum, int k) const {
  Seq s = seq_before(k);
  const Generator& g = gens_[k];
  switch (g.kind) {
    case Gen::CupPEF:
    case Gen::CupPFE:
    case Gen::Bubble: return region_weight(datum, s, source_.weight, g.pos);
    default: return region_weight(datum, s, source_.weight, g.pos + g.in_width());
  }
}

int Diagram::generator_degree(const CartanDatum& datum, int k) const {
  const Generator& g = gens_[k];
  int di = datum.d(g.i);
  switch (g.kind) {
    case Gen::Dot: return 2 * di;
    case Gen::CrossUU:
    case Gen::CrossDD: return -datum.form(g.i, g.j);
    case Gen::CrossFE:
    case Gen::CrossEF: return 0;
    case Gen::CupPEF:
    case Gen::CapCEF: return di + form_with_root(datum, outer_weight(datum, k), g.i);
    case Gen::CupPFE:
    case Gen::CapCFE: return di - form_with_root(datum, outer_weight(datum, k), g.i);
    case Gen::Bubble: return 2 * di * g.m;
  }
  return 0;
}

int Diagram::degree(const CartanDatum& datum) const {
  int total = 0;
  for (int k = 0; k < static_cast<int>(gens_.size()); ++k) total += generator_degree(datum, k);
  return total;
}

bool Diagram::is_upward() const {
  for (const auto& s : source_.seq)
    if (s.sign < 0) return false;
  for (const auto& g : gens_)
    if (g.kind != Gen::Dot && g.kind != Gen::CrossUU) return false;
  return true;
}

Diagram Diagram::canonical() const {
  Diagram d;
  d.source_ = source_;
  d.gens_ = gens_;
  auto& gs = d.gens_;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k + 1 < gs.size(); ++k) {
      Generator& g = gs[k];
      Generator& h = gs[k + 1];
      int p = g.pos, gout = g.out_width();
      int q = h.pos, hin = h.in_width(), hout = h.out_width();
      bool tie = gout == 0 && hin == 0 && q == p;
      bool swap = false;
      if (tie) {
        swap = tie_less(h, g);
      } else if (gout == 0 && hout == 0 && q + hin == p) {
        // swapping lands in a tie; agree with the tie order
        swap = tie_less(h, g);
      } else if (q + hin <= p) {
        swap = true;
      }
      if (!swap) continue;
      Generator lower = h;
      Generator upper = g;
      upper.pos = p + hout - hin;
      g = lower;
      h = upper;
      changed = true;
    }
  }
  return d;
}

Morphism::Morphism(const Diagram& d, Scalar coeff) : source_(d.source()), target_(d.target()) { add(d, coeff); }

Morphism Morphism::identity(const OneMorphism& s) { return Morphism(Diagram::identity(s)); }

void Morphism::add(const Diagram& d, const Scalar& c) {
  if (!(d.source() == source_) || !(d.target() == target_)) throw DiagramError("term is not parallel to the morphism");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(d, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Morphism::check_parallel(const Morphism& o) const {
  if (!(source_ == o.source_) || !(target_ == o.target_)) throw DiagramError("morphisms are not parallel");
}

Morphism& Morphism::operator+=(const Morphism& o) {
  check_parallel(o);
  for (const auto& [d, c] : o.terms_) add(d, c);
  return *this;
}

Morphism& Morphism::operator-=(const Morphism& o) {
  check_parallel(o);
  for (const auto& [d, c] : o.terms_) add(d, -c);
  return *this;
}

Morphism Morphism::operator+(const Morphism& o) const {
  Morphism r = *this;
  r += o;
  return r;
}

Morphism Morphism::operator-(const Morphism& o) const {
  Morphism r = *this;
  r -= o;
  return r;
}

Morphism Morphism::operator*(const Scalar& c) const {
  Morphism r(source_, target_);
  for (const auto& [d, x] : terms_) r.add(d, x * c);
  return r;
}

Morphism Morphism::operator-() const { return *this * Scalar(-1L); }

std::vector<int> Morphism::term_degrees(const CartanDatum& datum) const {
  std::vector<int> out;
  for (const auto& [d, c] : terms_) out.push_back(d.degree(datum));
  return out;
}

std::optional<int> Morphism::degree(const CartanDatum& datum) const {
  std::optional<int> deg;
  for (const auto& [d, c] : terms_) {
    int k = d.degree(datum);
    if (deg && *deg != k) throw DiagramError("morphism is not homogeneous");
    deg = k;
  }
  return deg;
}

Diagram compose_v(const Diagram& top, const Diagram& bottom) {
  if (!(top.source() == bottom.target())) throw DiagramError("vertical composition boundary mismatch");
  std::vector<Generator> gens = bottom.gens();
  gens.insert(gens.end(), top.gens().begin(), top.gens().end());
  return Diagram(bottom.source(), std::move(gens));
}

Morphism compose_v(const Morphism& top, const Morphism& bottom) {
  if (!(top.source() == bottom.target())) throw DiagramError("vertical composition boundary mismatch");
  Morphism out(bottom.source(), top.target());
  for (const auto& [dt, ct] : top.terms())
    for (const auto& [db, cb] : bottom.terms()) out.add(compose_v(dt, db), ct * cb);
  return out;
}

Diagram compose_h(const CartanDatum& datum, const Diagram& left, const Diagram& right) {
  Weight left_edge = right.source().codomain(datum);
  if (!(left.weight() == left_edge)) throw DiagramError("horizontal composition weight mismatch");
  if (left.source().shift != 0 || right.source().shift != 0)
    throw DiagramError("horizontal composition of shifted 1-morphisms is not supported");
  int nl = static_cast<int>(left.source().seq.size());
  OneMorphism src;
  src.seq = left.source().seq;
  src.seq.insert(src.seq.end(), right.source().seq.begin(), right.source().seq.end());
  src.weight = right.weight();
  std::vector<Generator> gens;
  for (Generator g : right.gens()) {
    g.pos += nl;
    gens.push_back(g);
  }
  for (const Generator& g : left.gens()) gens.push_back(g);
  return Diagram(std::move(src), std::move(gens));
}

Morphism compose_h(const CartanDatum& datum, const Morphism& left, const Morphism& right) {
  Diagram sl = Diagram::identity(left.source()), sr = Diagram::identity(right.source());
  Diagram tl = Diagram::identity(left.target()), tr = Diagram::identity(right.target());
  Morphism out(compose_h(datum, sl, sr).source(), compose_h(datum, tl, tr).source());
  for (const auto& [dl, cl] : left.terms())
    for (const auto& [dr, cr] : right.terms()) out.add(compose_h(datum, dl, dr), cl * cr);
  return out;
}

Seq dual_seq(const Seq& s) {
  Seq out;
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back({it->color, -it->sign});
  return out;
}

Diagram rotate_dual(const CartanDatum& datum, const Diagram& f) {
  Seq s = f.source().seq;
  Seq t = f.target_seq();
  int n = static_cast<int>(s.size()), m = static_cast<int>(t.size());
  OneMorphism src;
  src.seq = dual_seq(t);
  src.weight = f.source().codomain(datum);
  src.shift = f.source().shift;
  std::vector<Generator> gens;
  for (int k = 0; k < n; ++k) {
    Gen kind = s[k].sign > 0 ? Gen::CupPFE : Gen::CupPEF;
    gens.push_back(Generator::cupcap(kind, m + k, s[k].color));
  }
  for (Generator g : f.gens()) {
    g.pos += m;
    gens.push_back(g);
  }
  for (int k = 0; k < m; ++k) {
    // innermost pair (-t_1, t_1) first
    const Strand& x = t[k];
    Gen kind = x.sign > 0 ? Gen::CapCEF : Gen::CapCFE;
    gens.push_back(Generator::cupcap(kind, m - 1 - k, x.color));
  }
  return Diagram(std::move(src), std::move(gens));
}

Morphism rotate_dual(const CartanDatum& datum, const Morphism& f) {
  OneMorphism src{dual_seq(f.target().seq), f.source().codomain(datum), f.source().shift};
  OneMorphism tgt{dual_seq(f.source().seq), src.weight, f.target().shift};
  Morphism out(src, tgt);
  for (const auto& [d, c] : f.terms()) out.add(rotate_dual(datum, d), c);
  return out;
}

Diagram rotate_dual_inverse(const CartanDatum& datum, const Diagram& f) {
  Seq s = f.source().seq;
  Seq t = f.target_seq();
  int n = static_cast<int>(s.size()), m = static_cast<int>(t.size());
  OneMorphism src;
  src.seq = dual_seq(t);
  src.weight = f.source().codomain(datum);
  src.shift = f.source().shift;
  std::vector<Generator> gens;
  // outermost pair (-s_n, s_n) first, each new cup nested inside the last
  for (int k = 0; k < n; ++k) {
    const Strand& x = s[n - 1 - k];
    gens.push_back(Generator::cupcap(x.sign > 0 ? Gen::CupPEF : Gen::CupPFE, k, x.color));
  }
  for (Generator g : f.gens()) {
    g.pos += n;
    gens.push_back(g);
  }
  for (int k = 0; k < m; ++k) {
    const Strand& x = t[m - 1 - k];
    gens.push_back(Generator::cupcap(x.sign > 0 ? Gen::CapCFE : Gen::CapCEF, n + m - 1 - k, x.color));
  }
  return Diagram(std::move(src), std::move(gens));
}

Morphism rotate_dual_inverse(const CartanDatum& datum, const Morphism& f) {
  OneMorphism src{dual_seq(f.target().seq), f.source().codomain(datum), f.source().shift};
  OneMorphism tgt{dual_seq(f.source().seq), src.weight, f.target().shift};
  Morphism out(src, tgt);
  for (const auto& [d, c] : f.terms()) out.add(rotate_dual_inverse(datum, d), c);
  return out;
}

}  // namespace ucyc
