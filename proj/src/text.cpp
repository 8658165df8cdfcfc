#include "ucyc/text.hpp"

#include <cctype>

namespace ucyc {

namespace {

const std::string kSpade = "\xE2\x99\xA0";

class Reader {
 public:
  Reader(const CartanDatum& datum, std::string_view text) : datum_(datum), s_(text) {}

  Morphism morphism() {
    std::vector<std::pair<Scalar, Diagram>> terms;
    skip_ws();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    for (;;) {
      auto [c, d] = term();
      terms.emplace_back(neg ? -c : c, d);
      skip_ws();
      if (pos_ >= s_.size()) break;
      if (eat('+')) {
        neg = false;
      } else if (eat('-')) {
        neg = true;
      } else {
        fail("expected '+', '-' or end of input");
      }
    }
    Morphism out(terms.front().second.source(), terms.front().second.target());
    for (const auto& [c, d] : terms) {
      if (!(d.source() == out.source()) || !(d.target() == out.target()))
        fail("terms are not parallel: " + render_seq(datum_, d.source().seq) + " -> " +
             render_seq(datum_, d.target().seq) + " vs " + render_seq(datum_, out.source().seq) + " -> " +
             render_seq(datum_, out.target().seq));
      out.add(d, c);
    }
    return out;
  }

  Diagram lone_diagram() {
    Diagram d = diagram();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input after diagram");
    return d;
  }

 private:
  struct Item {
    Seq in;
    Seq out;
    std::optional<Generator> gen;  // pos relative to the item start
  };

  std::pair<Scalar, Diagram> term() {
    Scalar coeff = Scalar::one();
    ScalarParser sp(s_, pos_);
    if (sp.at_factor_start()) {
      try {
        coeff = sp.parse_factor();
        while (true) {
          std::size_t save = sp.pos();
          if (!sp.eat('*')) break;
          if (sp.at_factor_start()) {
            coeff *= sp.parse_factor();
          } else {
            pos_ = sp.pos();
            break;
          }
          (void)save;
        }
        pos_ = sp.pos();
      } catch (const ScalarError& e) {
        fail(e.what());
      }
    }
    return {coeff, diagram()};
  }

  Diagram diagram() {
    std::vector<std::vector<Item>> slices;
    std::vector<std::size_t> slice_pos;
    for (;;) {
      skip_ws();
      slice_pos.push_back(pos_);
      slices.push_back(slice());
      skip_ws();
      if (!eat(';')) break;
    }
    skip_ws();
    if (!eat('@')) fail("expected '@' followed by the rightmost weight");
    Weight w = weight();
    // Assemble generators slice by slice.
    OneMorphism src;
    src.weight = w;
    for (const auto& it : slices.front()) src.seq.insert(src.seq.end(), it.in.begin(), it.in.end());
    Seq cur = src.seq;
    std::vector<Generator> gens;
    for (std::size_t k = 0; k < slices.size(); ++k) {
      Seq in, out;
      for (const auto& it : slices[k]) {
        in.insert(in.end(), it.in.begin(), it.in.end());
        out.insert(out.end(), it.out.begin(), it.out.end());
      }
      if (!(in == cur)) {
        std::size_t save = pos_;
        pos_ = slice_pos[k];
        std::string msg = "boundary mismatch: expected " + render_seq(datum_, cur) + ", slice has " + render_seq(datum_, in);
        pos_ = save;
        fail_at(slice_pos[k], msg);
      }
      int offset = 0;  // position in the evolving sequence
      for (const auto& it : slices[k]) {
        if (it.gen) {
          Generator g = *it.gen;
          g.pos = offset;
          gens.push_back(g);
        }
        offset += static_cast<int>(it.out.size());
      }
      cur = out;
    }
    try {
      return Diagram(src, gens);
    } catch (const DiagramError& e) {
      fail(e.what());
    }
  }

  std::vector<Item> slice() {
    std::vector<Item> items;
    items.push_back(item());
    while (true) {
      skip_ws();
      if (!eat('|')) break;
      items.push_back(item());
    }
    return items;
  }

  Item item() {
    skip_ws();
    std::size_t start = pos_;
    std::string name;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) name += s_[pos_++];
    if (name.empty()) fail("expected a diagram item");
    expect('(');
    Item it;
    if (name == "id") {
      skip_ws();
      if (eat(')')) return it;
      Strand a = strand();
      expect(')');
      it.in = it.out = {a};
    } else if (name == "dot") {
      Strand a = strand();
      expect(')');
      it.in = it.out = {a};
      it.gen = Generator::dot(0, a.color, a.sign);
    } else if (name == "x") {
      Strand a = strand();
      expect(',');
      Strand b = strand();
      expect(')');
      Generator g = crossing_for(0, a, b);
      it.in = g.inputs();
      it.out = g.outputs();
      it.gen = g;
    } else if (name == "cup" || name == "cap") {
      skip_ws();
      std::string letters;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) letters += s_[pos_++];
      if (letters != "fe" && letters != "ef") fail("cup/cap orientation must be 'fe' or 'ef'");
      expect(',');
      int c = color();
      expect(')');
      Gen kind;
      if (name == "cup") kind = letters == "fe" ? Gen::CupPEF : Gen::CupPFE;
      else kind = letters == "fe" ? Gen::CapCFE : Gen::CapCEF;
      Generator g = Generator::cupcap(kind, 0, c);
      it.in = g.inputs();
      it.out = g.outputs();
      it.gen = g;
    } else if (name == "bub") {
      skip_ws();
      std::string orient;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) orient += s_[pos_++];
      if (orient != "cw" && orient != "ccw") fail("bubble orientation must be cw or ccw");
      expect(',');
      int c = color();
      expect(',');
      skip_ws();
      if (s_.substr(pos_, kSpade.size()) == kSpade) {
        pos_ += kSpade.size();
      } else if (s_.substr(pos_, 5) == "spade") {
        pos_ += 5;
      } else {
        fail("expected spade label such as \xE2\x99\xA0+2");
      }
      skip_ws();
      int sign = 1;
      if (eat('+')) sign = 1;
      else if (eat('-')) sign = -1;
      else fail("expected '+m' after the spade");
      int m = sign * static_cast<int>(integer());
      expect(')');
      it.gen = Generator::bubble(0, c, orient == "cw", m);
    } else {
      fail_at(start, "unknown item '" + name + "'");
    }
    return it;
  }

  Strand strand() {
    skip_ws();
    int sign;
    if (eat('+')) sign = 1;
    else if (eat('-')) sign = -1;
    else fail("expected a signed color such as +1 or -2");
    return {color(), sign};
  }

  int color() {
    std::size_t start = pos_;
    long v = integer();
    if (!datum_.has_label(static_cast<int>(v))) fail_at(start, "unknown color " + std::to_string(v));
    return datum_.pos(static_cast<int>(v));
  }

  long integer() {
    skip_ws();
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    long v = std::stol(std::string(s_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }

  Weight weight() {
    skip_ws();
    expect('[');
    std::vector<int> coords;
    coords.push_back(static_cast<int>(integer()));
    while (eat(',')) coords.push_back(static_cast<int>(integer()));
    expect(']');
    if (static_cast<int>(coords.size()) != datum_.rank())
      fail("weight has " + std::to_string(coords.size()) + " entries, expected " + std::to_string(datum_.rank()));
    return Weight::from_coords(datum_, coords);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!eat(ch)) fail(std::string("expected '") + ch + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < at && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  const CartanDatum& datum_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string strand_text(const CartanDatum& datum, const Strand& s) {
  return (s.sign > 0 ? "+" : "-") + std::to_string(datum.label(s.color));
}

std::string gen_text(const CartanDatum& datum, const Generator& g) {
  auto lab = [&](int c) { return std::to_string(datum.label(c)); };
  switch (g.kind) {
    case Gen::Dot: return "dot(" + strand_text(datum, {g.i, g.sign}) + ")";
    case Gen::CrossUU:
    case Gen::CrossDD:
    case Gen::CrossFE:
    case Gen::CrossEF: {
      Seq in = g.inputs();
      return "x(" + strand_text(datum, in[0]) + "," + strand_text(datum, in[1]) + ")";
    }
    case Gen::CupPEF: return "cup(fe," + lab(g.i) + ")";
    case Gen::CupPFE: return "cup(ef," + lab(g.i) + ")";
    case Gen::CapCFE: return "cap(fe," + lab(g.i) + ")";
    case Gen::CapCEF: return "cap(ef," + lab(g.i) + ")";
    case Gen::Bubble:
      return "bub(" + std::string(g.cw ? "cw" : "ccw") + "," + lab(g.i) + "," + kSpade + (g.m < 0 ? "-" : "+") +
             std::to_string(std::abs(g.m)) + ")";
  }
  return "?";
}

}  // namespace

Morphism parse_morphism(const CartanDatum& datum, std::string_view text) { return Reader(datum, text).morphism(); }

Diagram parse_diagram(const CartanDatum& datum, std::string_view text) { return Reader(datum, text).lone_diagram(); }

std::string render_diagram(const CartanDatum& datum, const Diagram& d) {
  std::string out;
  auto slice_text = [&](const Seq& seq, const Generator* g) {
    std::vector<std::string> items;
    int k = 0;
    int n = static_cast<int>(seq.size());
    while (k <= n) {
      if (g && k == g->pos) {
        items.push_back(gen_text(datum, *g));
        k += g->in_width();
        if (g->in_width() == 0 && k < n) {
          items.push_back("id(" + strand_text(datum, seq[k]) + ")");
          ++k;
        }
        g = nullptr;
        continue;
      }
      if (k == n) break;
      items.push_back("id(" + strand_text(datum, seq[k]) + ")");
      ++k;
    }
    if (items.empty()) return std::string("id()");
    std::string s;
    for (std::size_t x = 0; x < items.size(); ++x) {
      if (x) s += " | ";
      s += items[x];
    }
    return s;
  };
  if (d.gens().empty()) {
    out = slice_text(d.source().seq, nullptr);
  } else {
    Seq cur = d.source().seq;
    for (std::size_t k = 0; k < d.gens().size(); ++k) {
      if (k) out += " ; ";
      out += slice_text(cur, &d.gens()[k]);
      cur = d.seq_before(static_cast<int>(k) + 1);
    }
  }
  return out + " @ " + d.weight().render();
}

std::string render_term(const CartanDatum& datum, const Diagram& d, const Scalar& c, bool first) {
  Scalar coeff = c;
  bool neg = false;
  if (coeff.size() == 1 && coeff.terms().begin()->second < 0) {
    neg = true;
    coeff = -coeff;
  }
  std::string out;
  if (neg) out += first ? "-" : " - ";
  else if (!first) out += " + ";
  if (!coeff.is_one()) {
    if (coeff.size() == 1) out += coeff.render() + " * ";
    else out += "(" + coeff.render() + ") * ";
  }
  return out + render_diagram(datum, d);
}

std::string render_morphism(const CartanDatum& datum, const Morphism& m) {
  if (m.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [d, c] : m.terms()) {
    out += render_term(datum, d, c, first);
    first = false;
  }
  return out;
}

}  // namespace ucyc
