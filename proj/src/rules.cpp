#include "ucyc/rules.hpp"

#include <functional>
#include <sstream>

#include "ucyc/text.hpp"

namespace ucyc {

namespace {

using Builder = std::function<void(const Parameters&, const Weight&, std::vector<RelationInstance>&)>;

// Replaces {i}, {j}, {k} by color labels.
std::string sub(const CartanDatum& D, std::string t, int i, int j = 0, int k = 0) {
  const std::pair<std::string, int> keys[] = {{"{i}", i}, {"{j}", j}, {"{k}", k}};
  for (const auto& [key, c] : keys) {
    std::string lab = std::to_string(D.label(c));
    for (std::size_t p = t.find(key); p != std::string::npos; p = t.find(key, p + lab.size())) t.replace(p, 3, lab);
  }
  return t;
}

Morphism P(const CartanDatum& D, const std::string& text, const Weight& w) {
  return parse_morphism(D, text + " @ " + w.render());
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += " ; ";
    out += p;
  }
  return out;
}

std::string strand(const CartanDatum& D, const Strand& s) {
  return (s.sign > 0 ? "+" : "-") + std::to_string(D.label(s.color));
}

// Dots with the given exponents on an upward/downward sequence; the identity if none.
std::string dot_word(const CartanDatum& D, const Seq& seq, const std::vector<int>& exps) {
  std::vector<std::string> slices;
  for (std::size_t k = 0; k < seq.size(); ++k)
    for (int r = 0; r < exps[k]; ++r) {
      std::string sl;
      for (std::size_t l = 0; l < seq.size(); ++l) {
        if (l) sl += "|";
        sl += (l == k ? "dot(" : "id(") + strand(D, seq[l]) + ")";
      }
      slices.push_back(sl);
    }
  if (slices.empty()) {
    std::string sl;
    for (std::size_t l = 0; l < seq.size(); ++l) sl += (l ? "|id(" : "id(") + strand(D, seq[l]) + ")";
    return sl;
  }
  return join(slices);
}

struct Tag {
  std::string text;
  std::vector<int> colors;
  std::string variant;
};

Tag tag(const CartanDatum& D, std::initializer_list<int> colors, const Weight& w, const std::string& extra = "") {
  std::ostringstream o;
  const char* names[] = {"i", "j", "k"};
  int n = 0;
  for (int c : colors) o << names[n++] << "=" << D.label(c) << " ";
  o << "@ " << w.render();
  if (!extra.empty()) o << " " << extra;
  return {o.str(), colors, extra};
}

Morphism zero_like(const Morphism& m) { return Morphism(m.source(), m.target()); }

void push(std::vector<RelationInstance>& out, const std::string& fam, Tag t, Morphism l, Morphism r) {
  out.push_back({fam, std::move(t.text), std::move(l), std::move(r), std::move(t.colors), std::move(t.variant)});
}

// Bubble with d literal dots.
std::string literal_bubble(const CartanDatum& D, int i, bool cw, int d) {
  std::vector<std::string> s;
  s.push_back(sub(D, cw ? "cup(ef,{i})" : "cup(fe,{i})", i));
  for (int r = 0; r < d; ++r) s.push_back(sub(D, cw ? "dot(+{i})|id(-{i})" : "id(-{i})|dot(+{i})", i));
  s.push_back(sub(D, cw ? "cap(fe,{i})" : "cap(ef,{i})", i));
  return join(s);
}

const std::vector<std::pair<RuleFamily, Builder>>& catalogue() {
  static const std::vector<std::pair<RuleFamily, Builder>> cat = [] {
    std::vector<std::pair<RuleFamily, Builder>> c;
    auto fam = [&](std::string name, Orientation o, std::string summary, Builder b) {
      c.push_back({RuleFamily{std::move(name), o, std::move(summary)}, std::move(b)});
    };
    const Orientation Red = Orientation::Reducing, Bi = Orientation::Bidirectional;

    fam("biadjoint1", Red, "zigzag of the (E,F) adjunction is the identity",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            push(out, "biadjoint1", tag(D, {i}, w, "E"), P(D, sub(D, "id(+{i})|cup(fe,{i}) ; cap(fe,{i})|id(+{i})", i), w),
                 P(D, sub(D, "id(+{i})", i), w));
            push(out, "biadjoint1", tag(D, {i}, w, "F"), P(D, sub(D, "cup(fe,{i})|id(-{i}) ; id(-{i})|cap(fe,{i})", i), w),
                 P(D, sub(D, "id(-{i})", i), w));
          }
        });
    fam("biadjoint2", Red, "zigzag of the (F,E) adjunction is the identity",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            push(out, "biadjoint2", tag(D, {i}, w, "E"), P(D, sub(D, "cup(ef,{i})|id(+{i}) ; id(+{i})|cap(ef,{i})", i), w),
                 P(D, sub(D, "id(+{i})", i), w));
            push(out, "biadjoint2", tag(D, {i}, w, "F"), P(D, sub(D, "id(-{i})|cup(ef,{i}) ; cap(ef,{i})|id(-{i})", i), w),
                 P(D, sub(D, "id(-{i})", i), w));
          }
        });
    fam("cyclic_dot", Bi, "both mates of an upward dot are the downward dot",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            Morphism up = P(D, sub(D, "dot(+{i})", i), w);
            Morphism one = rotate_dual(D, up);
            Morphism three = rotate_dual_inverse(D, up);
            Morphism down(Diagram(one.source(), {Generator::dot(0, i, -1)}));
            push(out, "cyclic_dot", tag(D, {i}, w, "right"), one, down);
            push(out, "cyclic_dot", tag(D, {i}, w, "left"), three, down);
          }
        });
    fam("cyclic", Bi, "both mates of an upward crossing are the downward crossing",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              Morphism up = P(D, sub(D, "x(+{i},+{j})", i, j), w);
              Morphism one = rotate_dual(D, up);
              Morphism three = rotate_dual_inverse(D, up);
              const Seq& s = one.source().seq;
              Morphism down(Diagram(one.source(), {crossing_for(0, s[0], s[1])}));
              push(out, "cyclic", tag(D, {i, j}, w, "right"), one, down);
              push(out, "cyclic", tag(D, {i, j}, w, "left"), three, down);
            }
        });
    fam("crossl", Bi, "sideways crossing (E,F) as a mate of the upward crossing",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              Morphism l = P(D, sub(D, "x(+{j},-{i})", i, j), w);
              push(out, "crossl", tag(D, {i, j}, w, "a"), l,
                   P(D, sub(D, "cup(fe,{i})|id(+{j})|id(-{i}) ; id(-{i})|x(+{i},+{j})|id(-{i}) ; id(-{i})|id(+{j})|cap(fe,{i})", i, j), w));
              push(out, "crossl", tag(D, {i, j}, w, "b"), l,
                   P(D, sub(D, "id(+{j})|id(-{i})|cup(fe,{j}) ; id(+{j})|x(-{i},-{j})|id(+{j}) ; cap(fe,{j})|id(-{i})|id(+{j})", i, j), w));
            }
        });
    fam("crossr", Bi, "sideways crossing (F,E) as a mate of the upward crossing",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              Morphism l = P(D, sub(D, "x(-{j},+{i})", i, j), w);
              push(out, "crossr", tag(D, {i, j}, w, "a"), l,
                   P(D, sub(D, "id(-{j})|id(+{i})|cup(ef,{j}) ; id(-{j})|x(+{i},+{j})|id(-{j}) ; cap(ef,{j})|id(+{i})|id(-{j})", i, j), w));
              push(out, "crossr", tag(D, {i, j}, w, "b"), l,
                   P(D, sub(D, "cup(ef,{i})|id(-{j})|id(+{i}) ; id(+{i})|x(-{i},-{j})|id(+{i}) ; id(+{i})|id(-{j})|cap(ef,{i})", i, j), w));
            }
        });
    fam("r2_ij", Red, "upward double crossing",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              Morphism l = P(D, sub(D, "x(+{i},+{j}) ; x(+{j},+{i})", i, j), w);
              Seq seq = l.source().seq;
              Morphism r = zero_like(l);
              if (i != j && D.a(i, j) == 0) {
                r = P(D, dot_word(D, seq, {0, 0}), w) * Pm.t(i, j);
              } else if (i != j) {
                r = P(D, dot_word(D, seq, {D.dij(i, j), 0}), w) * Pm.t(i, j) +
                    P(D, dot_word(D, seq, {0, D.dij(j, i)}), w) * Pm.t(j, i);
                for (int p = 0; p < D.dij(i, j); ++p)
                  for (int q = 0; q < D.dij(j, i); ++q)
                    if (D.s_admissible(i, j, p, q)) r += P(D, dot_word(D, seq, {p, q}), w) * Pm.s(i, j, p, q);
              }
              push(out, "r2_ij", tag(D, {i, j}, w), l, r);
            }
        });
    fam("dot_slide_ii", Bi, "a dot passes an equal-color crossing up to the identity",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            Morphism id = P(D, sub(D, "id(+{i})|id(+{i})", i), w);
            push(out, "dot_slide_ii", tag(D, {i}, w, "left"),
                 P(D, sub(D, "dot(+{i})|id(+{i}) ; x(+{i},+{i})", i), w) - P(D, sub(D, "x(+{i},+{i}) ; id(+{i})|dot(+{i})", i), w),
                 id);
            push(out, "dot_slide_ii", tag(D, {i}, w, "right"),
                 P(D, sub(D, "x(+{i},+{i}) ; dot(+{i})|id(+{i})", i), w) - P(D, sub(D, "id(+{i})|dot(+{i}) ; x(+{i},+{i})", i), w),
                 id);
          }
        });
    fam("dot_slide_ij", Bi, "a dot passes a crossing of different colors",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              if (i == j) continue;
              push(out, "dot_slide_ij", tag(D, {i, j}, w, "left"), P(D, sub(D, "dot(+{i})|id(+{j}) ; x(+{i},+{j})", i, j), w),
                   P(D, sub(D, "x(+{i},+{j}) ; id(+{j})|dot(+{i})", i, j), w));
              push(out, "dot_slide_ij", tag(D, {i, j}, w, "right"), P(D, sub(D, "id(+{i})|dot(+{j}) ; x(+{i},+{j})", i, j), w),
                   P(D, sub(D, "x(+{i},+{j}) ; dot(+{j})|id(+{i})", i, j), w));
            }
        });
    auto braid_l = "x(+{i},+{j})|id(+{k}) ; id(+{j})|x(+{i},+{k}) ; x(+{j},+{k})|id(+{i})";
    auto braid_r = "id(+{i})|x(+{j},+{k}) ; x(+{i},+{k})|id(+{j}) ; id(+{k})|x(+{i},+{j})";
    fam("r3_easy", Bi, "braid move without correction",
        [=](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j)
              for (int k = 0; k < D.rank(); ++k) {
                if (i == k && i != j && D.form(i, j) < 0) continue;
                push(out, "r3_easy", tag(D, {i, j, k}, w), P(D, sub(D, braid_l, i, j, k), w), P(D, sub(D, braid_r, i, j, k), w));
              }
        });
    fam("r3_hard", Bi, "braid move (i,j,i) with its polynomial correction",
        [=](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              if (i == j || D.form(i, j) >= 0) continue;
              Morphism l = P(D, sub(D, braid_l, i, j, i), w);
              Morphism r = P(D, sub(D, braid_r, i, j, i), w);
              const Seq seq = l.source().seq;
              for (int l1 = 0; l1 <= D.dij(i, j) - 1; ++l1)
                r += P(D, dot_word(D, seq, {l1, 0, D.dij(i, j) - 1 - l1}), w) * Pm.t(i, j);
              for (int p = 0; p < D.dij(i, j); ++p)
                for (int q = 0; q < D.dij(j, i); ++q) {
                  if (!D.s_admissible(i, j, p, q)) continue;
                  for (int l1 = 0; l1 <= p - 1; ++l1)
                    r += P(D, dot_word(D, seq, {l1, q, p - 1 - l1}), w) * Pm.s(i, j, p, q);
                }
              push(out, "r3_hard", tag(D, {i, j}, w), l, r);
            }
        });
    fam("mixed_rel", Red, "opposite strands of different colors pass through each other",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i)
            for (int j = 0; j < D.rank(); ++j) {
              if (i == j) continue;
              push(out, "mixed_rel", tag(D, {i, j}, w, "EF"), P(D, sub(D, "x(+{i},-{j}) ; x(-{j},+{i})", i, j), w),
                   P(D, sub(D, "id(+{i})|id(-{j})", i, j), w));
              push(out, "mixed_rel", tag(D, {i, j}, w, "FE"), P(D, sub(D, "x(-{i},+{j}) ; x(+{j},-{i})", i, j), w),
                   P(D, sub(D, "id(-{i})|id(+{j})", i, j), w));
            }
        });
    fam("positivity", Red, "bubbles of negative degree vanish",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            const int n = w.pairing(i);
            for (int d = 0; d < n - 1; ++d) {
              Morphism l = P(D, literal_bubble(D, i, true, d), w);
              push(out, "positivity", tag(D, {i}, w, "cw dots=" + std::to_string(d)), l, zero_like(l));
            }
            for (int d = 0; d < -n - 1; ++d) {
              Morphism l = P(D, literal_bubble(D, i, false, d), w);
              push(out, "positivity", tag(D, {i}, w, "ccw dots=" + std::to_string(d)), l, zero_like(l));
            }
          }
        });
    fam("degree_zero", Red, "degree zero bubbles are the bubble parameters",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          Morphism id = Morphism::identity(OneMorphism{{}, w, 0});
          for (int i = 0; i < D.rank(); ++i) {
            const int n = w.pairing(i);
            const Scalar c = Pm.bubble_param(i, w);
            if (n >= 1) push(out, "degree_zero", tag(D, {i}, w, "cw"), P(D, literal_bubble(D, i, true, n - 1), w), id * c);
            if (n <= -1)
              push(out, "degree_zero", tag(D, {i}, w, "ccw"), P(D, literal_bubble(D, i, false, -n - 1), w), id * c.inverse());
          }
        });
    fam("fake", Red, "fake bubbles through the infinite Grassmannian relation",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          Morphism id = Morphism::identity(OneMorphism{{}, w, 0});
          for (int i = 0; i < D.rank(); ++i) {
            const Scalar c = Pm.bubble_param(i, w);
            push(out, "fake", tag(D, {i}, w, "cw0"), P(D, sub(D, "bub(cw,{i},spade+0)", i), w), id * c);
            push(out, "fake", tag(D, {i}, w, "ccw0"), P(D, sub(D, "bub(ccw,{i},spade+0)", i), w), id * c.inverse());
            for (int k = 1; k <= 3; ++k) {
              Morphism l(OneMorphism{{}, w, 0}, OneMorphism{{}, w, 0});
              for (int a = 0; a <= k; ++a)
                l += P(D, sub(D, "bub(cw,{i},spade+" + std::to_string(a) + ") ; bub(ccw,{i},spade+" + std::to_string(k - a) + ")", i), w);
              push(out, "fake", tag(D, {i}, w, "grassmann degree " + std::to_string(k)), l, zero_like(l));
            }
          }
        });
    fam("EF", Red, "identity of E F as double crossing plus bubbles",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            const int n = w.pairing(i);
            Morphism l = P(D, sub(D, "id(+{i})|id(-{i})", i), w);
            Morphism r = -P(D, sub(D, "x(+{i},-{i}) ; x(-{i},+{i})", i), w);
            for (int f1 = 0; f1 <= n - 1; ++f1)
              for (int f2 = 0; f1 + f2 <= n - 1; ++f2) {
                const int f3 = n - 1 - f1 - f2;
                std::vector<std::string> s;
                for (int r3 = 0; r3 < f3; ++r3) s.push_back(sub(D, "dot(+{i})|id(-{i})", i));
                s.push_back(sub(D, "cap(fe,{i})", i));
                s.push_back(sub(D, "bub(ccw,{i},spade+" + std::to_string(f2) + ")", i));
                s.push_back(sub(D, "cup(ef,{i})", i));
                for (int r1 = 0; r1 < f1; ++r1) s.push_back(sub(D, "dot(+{i})|id(-{i})", i));
                r += P(D, join(s), w);
              }
            push(out, "EF", tag(D, {i}, w), l, r);
          }
        });
    fam("FE", Red, "identity of F E as double crossing plus bubbles",
        [](const Parameters& Pm, const Weight& w, auto& out) {
          const auto& D = Pm.datum();
          for (int i = 0; i < D.rank(); ++i) {
            const int n = w.pairing(i);
            Morphism l = P(D, sub(D, "id(-{i})|id(+{i})", i), w);
            Morphism r = -P(D, sub(D, "x(-{i},+{i}) ; x(+{i},-{i})", i), w);
            for (int g1 = 0; g1 <= -n - 1; ++g1)
              for (int g2 = 0; g1 + g2 <= -n - 1; ++g2) {
                const int g3 = -n - 1 - g1 - g2;
                std::vector<std::string> s;
                for (int r3 = 0; r3 < g3; ++r3) s.push_back(sub(D, "id(-{i})|dot(+{i})", i));
                s.push_back(sub(D, "cap(ef,{i})", i));
                s.push_back(sub(D, "bub(cw,{i},spade+" + std::to_string(g2) + ")", i));
                s.push_back(sub(D, "cup(fe,{i})", i));
                for (int r1 = 0; r1 < g1; ++r1) s.push_back(sub(D, "id(-{i})|dot(+{i})", i));
                r += P(D, join(s), w);
              }
            push(out, "FE", tag(D, {i}, w), l, r);
          }
        });
    return c;
  }();
  return cat;
}

const Builder& builder(const std::string& name) {
  for (const auto& [f, b] : catalogue())
    if (f.name == name) return b;
  throw RuleError("unknown rule family '" + name + "'");
}

}  // namespace

std::vector<Weight> weight_box(const CartanDatum& datum, int range) {
  std::vector<Weight> out;
  std::vector<int> c(datum.rank(), -range);
  while (true) {
    out.push_back(Weight::from_coords(datum, c));
    int k = 0;
    while (k < datum.rank() && c[k] == range) c[k++] = -range;
    if (k == datum.rank()) break;
    ++c[k];
  }
  return out;
}

bool is_homogeneous(const CartanDatum& datum, const RelationInstance& r, std::string* why) {
  std::vector<int> deg = r.lhs.term_degrees(datum);
  for (int d : r.rhs.term_degrees(datum)) deg.push_back(d);
  for (int d : deg)
    if (d != deg.front()) {
      if (why) {
        std::ostringstream o;
        o << "degrees";
        for (int x : deg) o << " " << x;
        *why = o.str();
      }
      return false;
    }
  return true;
}

RuleSet RuleSet::install(const Parameters& params, int range) {
  RuleSet rs;
  rs.params_ = params;
  for (const auto& [f, b] : catalogue()) rs.families_.push_back(f);
  for (const Weight& w : weight_box(params.datum(), range))
    for (const auto& f : rs.families_)
      for (const RelationInstance& r : rs.instances_at(f.name, w)) {
        std::string why;
        if (!is_homogeneous(params.datum(), r, &why))
          throw RuleError("rule family '" + f.name + "' is not homogeneous at " + r.tag + ": " + why);
      }
  return rs;
}

const RuleFamily& RuleSet::family(const std::string& name) const {
  for (const auto& f : families_)
    if (f.name == name) return f;
  throw RuleError("unknown rule family '" + name + "'");
}

std::vector<RelationInstance> RuleSet::instances_at(const std::string& family, const Weight& w) const {
  std::vector<RelationInstance> out;
  builder(family)(params_, w, out);
  return out;
}

std::vector<RelationInstance> RuleSet::instances(const std::string& family, int range) const {
  std::vector<RelationInstance> out;
  for (const Weight& w : weight_box(params_.datum(), range)) {
    auto part = instances_at(family, w);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace ucyc
