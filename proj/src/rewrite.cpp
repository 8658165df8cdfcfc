#include "ucyc/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <regex>
#include <sstream>

namespace ucyc {

// ---------------------------------------------------------------------------
// Graph sums.

void GraphSum::add(const PlanarGraph& g, const Scalar& c) {
  if (c.is_zero()) return;
  std::string k = g.key();
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(std::move(k), std::make_pair(g, c));
    return;
  }
  it->second.second += c;
  if (it->second.second.is_zero()) terms_.erase(it);
}

void GraphSum::add(const GraphSum& o, const Scalar& c) {
  for (const auto& [k, t] : o.terms_) add(t.first, t.second * c);
}

bool GraphSum::operator==(const GraphSum& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (auto a = terms_.begin(), b = o.terms_.begin(); a != terms_.end(); ++a, ++b)
    if (a->first != b->first || !(a->second.second == b->second.second)) return false;
  return true;
}

GraphSum to_graphs(const CartanDatum& datum, const Morphism& m) {
  GraphSum s;
  for (const auto& [d, c] : m.terms()) s.add(graph_from_diagram(datum, d), c);
  return s;
}

Morphism to_morphism(const GraphSum& s, const OneMorphism& source, const OneMorphism& target) {
  Morphism out(source, target);
  for (const auto& [k, t] : s.terms()) out.add(Diagram(source, graph_to_diagram(t.first).gens()).canonical(), t.second);
  return out;
}

// ---------------------------------------------------------------------------
// Traces.

std::string TraceStep::render() const {
  std::ostringstream o;
  o << "RULE " << rule << " @ " << term << ":";
  for (std::size_t k = 0; k < site.size(); ++k) o << (k ? "," : "") << site[k];
  o << " {" << bindings << "}";
  return o.str();
}

TraceStep TraceStep::parse(const std::string& line) {
  static const std::regex re(R"(^\s*RULE\s+(\S+)\s+@\s+(\d+):([0-9,]*)\s*\{([^}]*)\}\s*$)");
  std::smatch m;
  if (!std::regex_match(line, m, re)) throw RewriteError("malformed trace line: " + line);
  TraceStep s;
  s.rule = m[1];
  s.term = std::stoi(m[2]);
  std::stringstream in(m[3].str());
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) s.site.push_back(std::stoi(item));
  s.bindings = m[4];
  return s;
}

std::string RewriteTrace::render() const {
  std::string out;
  for (const auto& s : steps) out += s.render() + "\n";
  return out;
}

RewriteTrace RewriteTrace::parse(const std::string& text) {
  RewriteTrace t;
  std::stringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    t.steps.push_back(TraceStep::parse(line));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Settling.

namespace {

constexpr int kMarker = -7;  // placeholder color used to follow a face through a split

SurgeryEnd O(int v, int s) { return {true, v, s}; }
SurgeryEnd N(int k, int s) { return {false, k, s}; }

bool is_free_loop(const PlanarGraph& g, int e) { return g.edges[e].tail.v == PEnd::kNone; }

}  // namespace

Rewriter::Rewriter(Parameters params, int step_budget) : calc_(std::move(params)), budget_(step_budget) {}

GraphSum Rewriter::settle(const GraphSum& s) const {
  GraphSum out;
  for (const auto& [k, t] : s.terms()) out.add(settle(t.first), t.second);
  return out;
}

GraphSum Rewriter::settle(const PlanarGraph& g0) const {
  const CartanDatum& D = datum();
  GraphSum out, pending;
  pending.add(g0, Scalar::one());
  while (!pending.is_zero()) {
    GraphSum next;
    for (const auto& [key, t] : pending.terms()) {
      const PlanarGraph& g = t.first;
      const Scalar& c = t.second;
      // Bubbles already in the designated face are absorbed first.
      auto it = std::find_if(g.decos.begin(), g.decos.end(), [](const Deco& d) { return d.he < 0; });
      if (it != g.decos.end()) {
        BubblePolynomial val = calc_.bubble(it->sym.color, g.lambda(), it->sym.cw, it->sym.m);
        for (const auto& [mono, coeff] : val.terms()) {
          PlanarGraph h = g;
          h.decos.erase(h.decos.begin() + (it - g.decos.begin()));
          h.des = multiply(h.des, mono);
          h.canonicalize();
          next.add(h, c * coeff);
        }
        continue;
      }
      if (!g.decos.empty()) {
        // Move the first decoration one face closer to the designated face.
        FaceInfo f = g.faces();
        std::vector<std::vector<int>> adj(f.ngeo);
        for (int h = 0; h < g.he_count(); ++h)
          if (g.edges[h >> 1].alive) adj[f.geo_of(h)].push_back(h);
        std::vector<int> dist(f.ngeo, -1);
        std::deque<int> q{0};
        dist[0] = 0;
        while (!q.empty()) {
          int x = q.front();
          q.pop_front();
          for (int h : adj[x]) {
            int y = f.geo_of(h ^ 1);
            if (dist[y] < 0) {
              dist[y] = dist[x] + 1;
              q.push_back(y);
            }
          }
        }
        const Deco d = g.decos[0];
        int x = f.geo_of(d.he);
        if (x == 0) {
          PlanarGraph h = g;
          h.decos[0].he = -1;
          h.canonicalize();
          next.add(h, c);
          continue;
        }
        int cross_he = -1;
        for (int h : adj[x])
          if (dist[f.geo_of(h ^ 1)] == dist[x] - 1) {
            cross_he = h;
            break;
          }
        if (cross_he < 0) throw RewriteError("decoration cannot reach the designated face");
        int e = cross_he >> 1;
        bool on_right = cross_he & 1;
        for (const SlideTerm& st : calc_.slide_terms(d.sym.color, g.edges[e].color, d.sym.cw, d.sym.m, on_right)) {
          PlanarGraph h = g;
          h.decos[0].he = cross_he ^ 1;
          h.decos[0].sym.m = st.m;
          h.edges[e].dots += st.dots;
          h.canonicalize();
          next.add(h, c * st.coeff);
        }
        continue;
      }
      if (g.floating.empty()) {
        out.add(g, c);
        continue;
      }
      int ncomp = 0;
      std::vector<int> comp = g.edge_components(&ncomp);
      const int nfl = static_cast<int>(g.floating.size());
      int k = -1;
      for (int a = 0; a < nfl && k < 0; ++a) {
        int ca = comp[g.floating[a].outer_he >> 1];
        bool inner = true;
        for (int b = 0; b < nfl; ++b)
          if (b != a && g.floating[b].container_he >= 0 && comp[g.floating[b].container_he >> 1] == ca) inner = false;
        if (inner) k = a;
      }
      const Floating fl = g.floating[k];
      const int e = fl.outer_he >> 1;
      if (is_free_loop(g, e)) {
        FaceInfo f = g.faces();
        const Weight& w = f.weight[f.geo_of(fl.outer_he)];
        int i = g.edges[e].color;
        bool cw = fl.outer_he % 2 == 0;
        int base = cw ? pairing(D, i, w) - 1 : -pairing(D, i, w) - 1;
        int m = g.edges[e].dots - base;
        if (m < 0) continue;  // negative degree
        PlanarGraph h = g;
        h.edges[e].alive = false;
        h.floating.erase(h.floating.begin() + k);
        h.decos.push_back({fl.container_he, {i, cw, m}});
        h.canonicalize();
        next.add(h, c);
        continue;
      }
      if (g.ports() == 0 && nfl == 1) {
        out.add(g, c);  // the last closed component is reduced in place
        continue;
      }
      PlanarGraph gm = g;
      if (fl.container_he >= 0) gm.decos.push_back({fl.container_he, {kMarker, true, 0}});
      auto [inner, rest] = split_floating(gm, k);
      auto val = evaluate_closed(inner);
      if (!val) {
        out.add(g, c);  // stuck; reported as not normal
        continue;
      }
      int anchor = -1;
      for (auto d = rest.decos.begin(); d != rest.decos.end(); ++d)
        if (d->sym.color == kMarker) {
          anchor = d->he;
          rest.decos.erase(d);
          break;
        }
      for (const auto& [mono, coeff] : val->terms()) {
        PlanarGraph h = rest;
        for (const auto& [col, mm] : mono) h.decos.push_back({anchor, {col, canonical_cw(inner.lambda(), col), mm}});
        h.canonicalize();
        next.add(h, c * coeff);
      }
    }
    pending = std::move(next);
  }
  return out;
}

std::optional<BubblePolynomial> Rewriter::evaluate_closed(const PlanarGraph& g) const {
  std::string key = g.key();
  if (auto it = closed_memo_.find(key); it != closed_memo_.end()) return it->second;
  if (closed_depth_ > 64) throw RewriteError("closed evaluation nests too deeply");
  ++closed_depth_;
  bool normal = true;
  GraphSum r;
  try {
    r = reduce(settle(g), nullptr, &normal);
  } catch (...) {
    --closed_depth_;
    throw;
  }
  --closed_depth_;
  std::optional<BubblePolynomial> out = BubblePolynomial(g.lambda());
  for (const auto& [k, t] : r.terms()) {
    bool empty = t.first.floating.empty() && t.first.decos.empty();
    for (const PEdge& e : t.first.edges) empty = empty && !e.alive;
    if (!empty) {
      out.reset();
      break;
    }
    out->add(t.first.des, t.second);
  }
  closed_memo_.emplace(key, out);
  return out;
}

// ---------------------------------------------------------------------------
// Sites.

namespace {

struct Bigon {
  enum Kind { Parallel, Cyclic0, Cyclic1 } kind;
  int u, v;
  int e1, e2;
  int he;  // a half-edge inside the bigon
};

struct Curl {
  int v;
  int e;
  bool right;  // loop TR -> BR
};

// Three crossings around a triangle face. Pattern p is the braid word
// (k, k+1, k) read upwards: u.TL->w.BL, u.TR->v.BL, v.TL->w.BR. Otherwise it
// is (k+1, k, k+1): u.TL->v.BR, u.TR->w.BR, v.TR->w.BL.
struct Triangle {
  bool p;
  int u, v, w;
  int e[3];
};

struct Sites {
  std::vector<Bigon> bigons;
  std::vector<Curl> curls;
  std::vector<Triangle> triangles;
  std::vector<int> cyclic;  // face cycles that are oriented triangles
};

std::optional<Triangle> match_triangle(const PlanarGraph& g, int u, bool p) {
  auto head_at = [&](int e, int slot) {
    const PEnd& h = g.edges[e].head;
    return h.v >= 0 && h.slot == slot ? h.v : -1;
  };
  const PCross& cu = g.cross[u];
  Triangle t{p, u, -1, -1, {cu.edge[3], cu.edge[2], -1}};
  if (p) {
    t.w = head_at(t.e[0], 0);
    t.v = head_at(t.e[1], 0);
    if (t.v < 0 || t.w < 0) return std::nullopt;
    t.e[2] = g.cross[t.v].edge[3];
    if (head_at(t.e[2], 1) != t.w) return std::nullopt;
  } else {
    t.v = head_at(t.e[0], 1);
    t.w = head_at(t.e[1], 1);
    if (t.v < 0 || t.w < 0) return std::nullopt;
    t.e[2] = g.cross[t.v].edge[2];
    if (head_at(t.e[2], 0) != t.w) return std::nullopt;
  }
  if (t.u == t.v || t.v == t.w || t.u == t.w) return std::nullopt;
  return t;
}

Sites find_sites(const PlanarGraph& g) {
  Sites out;
  FaceInfo f = g.faces();
  std::vector<char> outer(f.cycles.size(), 0);
  for (const Floating& fl : g.floating) outer[f.cyc[fl.outer_he]] = 1;
  for (std::size_t c = 0; c < f.cycles.size(); ++c) {
    if (outer[c]) continue;
    const auto& cy = f.cycles[c];
    if (cy.size() == 1) {
      const PEdge& x = g.edges[cy[0] >> 1];
      if (x.tail.v < 0 || x.tail.v != x.head.v) continue;
      if (x.tail.slot == 2 && x.head.slot == 1) out.curls.push_back({x.tail.v, cy[0] >> 1, true});
      if (x.tail.slot == 3 && x.head.slot == 0) out.curls.push_back({x.tail.v, cy[0] >> 1, false});
    } else if (cy.size() == 2) {
      int e1 = cy[0] >> 1, e2 = cy[1] >> 1;
      if (e1 == e2) continue;
      const PEdge& a = g.edges[e1];
      const PEdge& b = g.edges[e2];
      if (a.tail.v < 0 || a.head.v < 0 || b.tail.v < 0 || b.head.v < 0) continue;
      if (a.tail.v == a.head.v || b.tail.v == b.head.v) continue;
      if (a.tail.v == b.tail.v && a.head.v == b.head.v) {
        const PEdge& l = a.tail.slot == 3 ? a : b;
        const PEdge& r = a.tail.slot == 3 ? b : a;
        if (l.tail.slot == 3 && l.head.slot == 0 && r.tail.slot == 2 && r.head.slot == 1)
          out.bigons.push_back({Bigon::Parallel, a.tail.v, a.head.v, l.tail.slot == a.tail.slot ? e1 : e2,
                                l.tail.slot == a.tail.slot ? e2 : e1, cy[0]});
      } else if (a.tail.v == b.head.v && a.head.v == b.tail.v) {
        int u = std::min(a.tail.v, b.tail.v), v = std::max(a.tail.v, b.tail.v);
        if (a.tail.slot == 3 && a.head.slot == 0 && b.tail.slot == 3 && b.head.slot == 0)
          out.bigons.push_back({Bigon::Cyclic0, u, v, e1, e2, cy[0]});
        else if (a.tail.slot == 2 && a.head.slot == 1 && b.tail.slot == 2 && b.head.slot == 1)
          out.bigons.push_back({Bigon::Cyclic1, u, v, e1, e2, cy[0]});
      }
    } else if (cy.size() == 3) {
      int es[3] = {cy[0] >> 1, cy[1] >> 1, cy[2] >> 1};
      if (es[0] == es[1] || es[1] == es[2] || es[0] == es[2]) continue;
      bool crossings_only = true;
      for (int e : es) crossings_only = crossings_only && g.edges[e].tail.v >= 0 && g.edges[e].head.v >= 0;
      if (!crossings_only) continue;
      if ((cy[0] & 1) == (cy[1] & 1) && (cy[1] & 1) == (cy[2] & 1)) {
        out.cyclic.push_back(static_cast<int>(c));
        continue;
      }
      for (int e : es)
        for (bool p : {true, false}) {
          auto t = match_triangle(g, g.edges[e].tail.v, p);
          if (!t) continue;
          std::set<int> a(t->e, t->e + 3), b(es, es + 3);
          if (a != b) continue;
          if (g.edges[es[0]].dots || g.edges[es[1]].dots || g.edges[es[2]].dots) continue;
          if (std::none_of(out.triangles.begin(), out.triangles.end(), [&](const Triangle& x) { return x.u == t->u; }))
            out.triangles.push_back(*t);
        }
    }
  }
  return out;
}

std::string colors(const CartanDatum& D, int i, int j) {
  return "i=" + std::to_string(D.label(i)) + " j=" + std::to_string(D.label(j));
}

// Bottom colors of a braid triangle, left to right; hard when they read
// (i, j, i) with (a_i, a_j) < 0.
bool r3_is_hard(const CartanDatum& D, const PlanarGraph& g, const Triangle& t, int* i, int* j) {
  const PCross& cu = g.cross[t.u];
  const PCross& cv = g.cross[t.v];
  int c1 = t.p ? cu.a : cv.a, c2 = t.p ? cu.b : cu.a, c3 = t.p ? cv.b : cu.b;
  *i = c1;
  *j = c2;
  return c1 == c3 && c1 != c2 && D.form(c1, c2) < 0;
}

// Pulls the strands of two half-edges of one face across each other, making
// a bigon of two crossings. Both half-edges walk the face in the same sense,
// so the strands are antiparallel there.
PlanarGraph insert_bigon(const PlanarGraph& g0, int hx, int hy) {
  PlanarGraph g = g0;
  const bool even = (hx & 1) == 0;
  const int ex = hx >> 1, ey = hy >> 1;
  const int X = g.edges[ex].color, Y = g.edges[ey].color;
  const int L = static_cast<int>(g.cross.size()), U = L + 1;
  g.cross.push_back(even ? PCross{X, Y} : PCross{Y, X});
  g.cross.push_back(even ? PCross{Y, X} : PCross{X, Y});
  auto split = [&](int e, int first, int in1, int out1, int second, int in2, int out2) {
    const PEnd head = g.edges[e].head;
    const int color = g.edges[e].color;
    const int mid = static_cast<int>(g.edges.size());
    g.edges.push_back(PEdge{{first, out1}, {second, in2}, color, 0, true});
    g.edges.push_back(PEdge{{second, out2}, head, color, 0, true});
    g.edges[e].head = {first, in1};
    g.cross[first].edge[in1] = e;
    g.cross[first].edge[out1] = mid;
    g.cross[second].edge[in2] = mid;
    g.cross[second].edge[out2] = mid + 1;
    if (head.v >= 0) g.cross[head.v].edge[head.slot] = mid + 1;
    else g.port_edge[head.slot] = mid + 1;
  };
  if (even) {
    split(ex, L, 0, 2, U, 1, 3);
    split(ey, U, 0, 2, L, 1, 3);
  } else {
    split(ex, L, 1, 3, U, 0, 2);
    split(ey, U, 1, 3, L, 0, 2);
  }
  g.canonicalize();
  return g;
}

}  // namespace

std::optional<TraceStep> Rewriter::reducing_site(const PlanarGraph& g) const {
  const CartanDatum& D = datum();
  Sites s = find_sites(g);
  auto dot_step = [&](int v, int slot) {
    const PCross& c = g.cross[v];
    return TraceStep{c.a == c.b ? "dot_slide_ii" : "dot_slide_ij", 0, {v, slot}, colors(D, c.a, c.b)};
  };
  for (const Curl& c : s.curls)
    if (g.edges[c.e].dots > 0) return dot_step(c.v, c.right ? 2 : 3);
  for (const Bigon& b : s.bigons) {
    if (g.edges[b.e1].dots || g.edges[b.e2].dots) continue;
    const PCross& u = g.cross[b.u];
    std::string name = b.kind == Bigon::Parallel ? "r2_ij"
                       : u.a != u.b              ? "mixed_rel"
                       : b.kind == Bigon::Cyclic0 ? "EF"
                                                  : "FE";
    return TraceStep{name, 0, {b.u, b.v}, colors(D, u.a, u.b)};
  }
  for (const Curl& c : s.curls) return TraceStep{"curl_split", 0, {c.v}, colors(D, g.cross[c.v].a, g.cross[c.v].a)};
  for (const Bigon& b : s.bigons) {
    int e = g.edges[b.e1].dots ? b.e1 : b.e2;
    return dot_step(g.edges[e].tail.v, g.edges[e].tail.slot);
  }
  return std::nullopt;
}

std::vector<TraceStep> Rewriter::search_moves(const PlanarGraph& g) const {
  const CartanDatum& D = datum();
  std::vector<TraceStep> out;
  Sites s = find_sites(g);
  for (const Triangle& t : s.triangles) {
    int i, j;
    bool hard = r3_is_hard(D, g, t, &i, &j);
    out.push_back({hard ? "r3_hard" : "r3_easy", 0, {t.u, t.v, t.w}, colors(D, i, j)});
  }
  if (s.cyclic.empty() || !g.floating.empty() || !g.decos.empty()) return out;
  // An oriented triangle is not a braid; a bigon pulled in next to it makes one.
  FaceInfo f = g.faces();
  std::set<std::pair<int, int>> pairs;
  for (int c : s.cyclic) {
    std::set<int> tri;
    for (int h : f.cycles[c]) tri.insert(h >> 1);
    for (int h : f.cycles[c]) {
      const auto& cy = f.cycles[f.cyc[h ^ 1]];
      for (int a : cy)
        for (int b : cy) {
          if (a >= b || (a & 1) != (b & 1) || (a >> 1) == (b >> 1)) continue;
          if (tri.count(a >> 1) || tri.count(b >> 1)) continue;
          if (g.edges[a >> 1].color == g.edges[b >> 1].color) continue;
          if (is_free_loop(g, a >> 1) || is_free_loop(g, b >> 1)) continue;
          pairs.insert({a, b});
        }
    }
  }
  for (auto [a, b] : pairs) out.push_back({"mixed_rel_inv", 0, {a, b}, colors(D, g.edges[a >> 1].color, g.edges[b >> 1].color)});
  return out;
}

// ---------------------------------------------------------------------------
// Rule application.

GraphSum Rewriter::apply_at(const PlanarGraph& g, const TraceStep& step) const {
  const CartanDatum& D = datum();
  const Parameters& P = calc_.params();
  auto fail = [&](const std::string& why) -> GraphSum {
    throw RewriteError("rule " + step.rule + " does not match: " + why);
  };
  auto crossing = [&](int v) -> const PCross& {
    if (v < 0 || v >= static_cast<int>(g.cross.size()) || !g.cross[v].alive) fail("no crossing " + std::to_string(v));
    return g.cross[v];
  };
  GraphSum raw;
  const std::string& r = step.rule;

  if (r == "dot_slide_ii" || r == "dot_slide_ij") {
    if (step.site.size() != 2) fail("site is (crossing, slot)");
    int v = step.site[0], slot = step.site[1];
    const PCross& c = crossing(v);
    if (slot < 0 || slot > 3) fail("bad slot");
    if ((c.a == c.b) != (r == "dot_slide_ii")) fail("colors");
    int e = c.edge[slot], e2 = c.edge[(slot + 2) % 4];
    if (g.edges[e].dots == 0) fail("no dot");
    if (e == e2) fail("dot would not move");
    PlanarGraph moved = g;
    moved.edges[e].dots -= 1;
    moved.edges[e2].dots += 1;
    moved.canonicalize();
    raw.add(moved, Scalar::one());
    if (c.a == c.b) {
      // x_TR psi = psi x_BL - S, x_TL psi = psi x_BR + S, and the reverse moves.
      static const int sign[4] = {1, -1, -1, 1};
      PlanarGraph base = g;
      base.edges[e].dots -= 1;
      Surgery s;
      s.site = {v};
      s.links = {{O(v, 0), O(v, 3), 0}, {O(v, 1), O(v, 2), 0}};
      raw.add(apply_surgery(base, s), Scalar(sign[slot]));
    }
    return settle(raw);
  }

  if (r == "curl_split") {
    if (step.site.size() != 1) fail("site is a crossing");
    int v = step.site[0];
    const PCross& c = crossing(v);
    Sites all = find_sites(g);
    auto it = std::find_if(all.curls.begin(), all.curls.end(), [&](const Curl& x) { return x.v == v; });
    if (it == all.curls.end()) fail("no curl at the crossing");
    if (g.edges[it->e].dots) fail("curl carries dots");
    // psi = psi x_mid-left psi = -psi x_mid-right psi; the dot goes on the
    // strand that stays outside the new bigon.
    Surgery s;
    s.site = {v};
    s.add = {PCross{c.a, c.b}, PCross{c.a, c.b}};
    s.links = {{O(v, 0), N(0, 0), 0}, {O(v, 1), N(0, 1), 0}, {N(1, 2), O(v, 2), 0}, {N(1, 3), O(v, 3), 0},
               {N(0, 3), N(1, 0), it->right ? 1 : 0}, {N(0, 2), N(1, 1), it->right ? 0 : 1}};
    raw.add(apply_surgery(g, s), Scalar(it->right ? 1 : -1));
    return settle(raw);
  }

  if (r == "r2_ij" || r == "mixed_rel" || r == "EF" || r == "FE") {
    if (step.site.size() != 2) fail("site is two crossings");
    Sites all = find_sites(g);
    auto it = std::find_if(all.bigons.begin(), all.bigons.end(),
                           [&](const Bigon& b) { return b.u == step.site[0] && b.v == step.site[1]; });
    if (it == all.bigons.end()) fail("no bigon");
    const Bigon b = *it;
    if (g.edges[b.e1].dots || g.edges[b.e2].dots) fail("bigon carries dots");
    const PCross& u = crossing(b.u);
    const int i = u.a, j = u.b;
    Surgery s;
    s.site = {b.u, b.v};
    s.remove_edges = {b.e1, b.e2};
    if (b.kind == Bigon::Parallel) {
      if (r != "r2_ij") fail("parallel bigon");
      auto add = [&](int p, int q, const Scalar& coeff) {
        s.links = {{O(b.u, 0), O(b.v, 3), p}, {O(b.u, 1), O(b.v, 2), q}};
        raw.add(apply_surgery(g, s), coeff);
      };
      if (i == j) return raw;
      if (D.a(i, j) == 0) {
        add(0, 0, P.t(i, j));
      } else {
        add(D.dij(i, j), 0, P.t(i, j));
        add(0, D.dij(j, i), P.t(j, i));
        for (int p = 0; p < D.dij(i, j); ++p)
          for (int q = 0; q < D.dij(j, i); ++q)
            if (D.s_admissible(i, j, p, q)) add(p, q, P.s(i, j, p, q));
      }
      return settle(raw);
    }
    const bool dir0 = b.kind == Bigon::Cyclic0;
    // Outer ends of u and v that survive: BR, TR in one direction, BL, TL in the other.
    const int lo = dir0 ? 1 : 0, hi = dir0 ? 2 : 3;
    if (i != j) {
      if (r != "mixed_rel") fail("colors");
      s.links = {{O(b.u, lo), O(b.v, hi), 0}, {O(b.v, lo), O(b.u, hi), 0}};
      raw.add(apply_surgery(g, s), Scalar::one());
      return settle(raw);
    }
    if (r != (dir0 ? "EF" : "FE")) fail("orientation");
    s.links = {{O(b.u, lo), O(b.v, hi), 0}, {O(b.v, lo), O(b.u, hi), 0}};
    raw.add(apply_surgery(g, s), Scalar(-1));
    FaceInfo f = g.faces();
    int mu = pairing(D, i, f.weight[f.geo_of(b.he)]);
    int n = dir0 ? mu - 2 - 1 : -(mu + 2) - 1;
    for (int f1 = 0; f1 <= n; ++f1)
      for (int f2 = 0; f1 + f2 <= n; ++f2) {
        int f3 = n - f1 - f2;
        s.links = {{O(b.u, lo), O(b.u, hi), f1}, {O(b.v, lo), O(b.v, hi), f3}};
        s.bubbles = {{0, dir0, {i, !dir0, f2}}};
        raw.add(apply_surgery(g, s), Scalar::one());
      }
    return settle(raw);
  }
  if (r == "r3_easy" || r == "r3_hard") {
    if (step.site.size() != 3) fail("site is three crossings");
    Sites all = find_sites(g);
    auto it = std::find_if(all.triangles.begin(), all.triangles.end(), [&](const Triangle& t) {
      return t.u == step.site[0] && t.v == step.site[1] && t.w == step.site[2];
    });
    if (it == all.triangles.end()) fail("no braid triangle");
    const Triangle t = *it;
    int i, j;
    const bool hard = r3_is_hard(D, g, t, &i, &j);
    if (hard != (r == "r3_hard")) fail("colors");
    const PCross& cu = crossing(t.u);
    const PCross& cv = crossing(t.v);
    Surgery s;
    s.site = {t.u, t.v, t.w};
    s.remove_edges = {t.e[0], t.e[1], t.e[2]};
    if (t.p) {
      s.add = {PCross{cu.b, cv.b}, PCross{cu.a, cv.b}, PCross{cu.a, cu.b}};
      s.links = {{O(t.u, 0), N(1, 0), 0}, {O(t.u, 1), N(0, 0), 0}, {O(t.v, 1), N(0, 1), 0},
                 {N(0, 3), N(1, 1), 0},   {N(0, 2), N(2, 1), 0},   {N(1, 3), O(t.w, 3), 0},
                 {N(1, 2), N(2, 0), 0},   {N(2, 3), O(t.w, 2), 0}, {N(2, 2), O(t.v, 2), 0}};
    } else {
      s.add = {PCross{cv.a, cu.a}, PCross{cv.a, cu.b}, PCross{cu.a, cu.b}};
      s.links = {{O(t.v, 0), N(0, 0), 0}, {O(t.u, 0), N(0, 1), 0}, {N(0, 2), N(1, 0), 0},
                 {O(t.u, 1), N(1, 1), 0}, {N(0, 3), N(2, 0), 0}, {N(1, 3), N(2, 1), 0},
                 {N(2, 3), O(t.v, 3), 0}, {N(2, 2), O(t.w, 3), 0}, {N(1, 2), O(t.w, 2), 0}};
    }
    raw.add(apply_surgery(g, s), Scalar::one());
    if (hard) {
      // (k,k+1,k) = (k+1,k,k+1) + straight strands with dots x1^l1 x2^q x3^l2.
      Surgery id;
      id.site = s.site;
      id.remove_edges = s.remove_edges;
      const Scalar sign(t.p ? 1 : -1);
      auto add = [&](int x1, int x2, int x3, const Scalar& c) {
        if (t.p)
          id.links = {{O(t.u, 0), O(t.w, 3), x1}, {O(t.u, 1), O(t.w, 2), x2}, {O(t.v, 1), O(t.v, 2), x3}};
        else
          id.links = {{O(t.v, 0), O(t.v, 3), x1}, {O(t.u, 0), O(t.w, 3), x2}, {O(t.u, 1), O(t.w, 2), x3}};
        raw.add(apply_surgery(g, id), c * sign);
      };
      const int d = D.dij(i, j);
      for (int l1 = 0; l1 < d; ++l1) add(l1, 0, d - 1 - l1, P.t(i, j));
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < D.dij(j, i); ++q)
          if (D.s_admissible(i, j, p, q))
            for (int l1 = 0; l1 < p; ++l1) add(l1, q, p - 1 - l1, P.s(i, j, p, q));
    }
    return settle(raw);
  }

  if (r == "mixed_rel_inv") {
    if (step.site.size() != 2) fail("site is two half-edges");
    const int a = step.site[0], b = step.site[1];
    if (a < 0 || b < 0 || a >= g.he_count() || b >= g.he_count()) fail("no such half-edge");
    if (!g.floating.empty() || !g.decos.empty()) fail("graph is not settled");
    const int ea = a >> 1, eb = b >> 1;
    if (ea == eb || !g.edges[ea].alive || !g.edges[eb].alive) fail("need two edges");
    if (is_free_loop(g, ea) || is_free_loop(g, eb)) fail("free loop");
    if ((a & 1) != (b & 1)) fail("strands are parallel");
    if (g.edges[ea].color == g.edges[eb].color) fail("colors");
    FaceInfo f = g.faces();
    if (f.cyc[a] != f.cyc[b]) fail("half-edges lie in different faces");
    raw.add(insert_bigon(g, a, b), Scalar::one());
    return settle(raw);
  }
  return fail("unknown rule");
}

GraphSum Rewriter::apply_step(const GraphSum& s, const TraceStep& step) const {
  if (step.term < 0 || step.term >= static_cast<int>(s.size())) throw RewriteError("trace step names a missing term");
  auto it = std::next(s.terms().begin(), step.term);
  GraphSum out;
  for (const auto& [k, t] : s.terms())
    if (k != it->first) out.add(t.first, t.second);
  out.add(apply_at(it->second.first, step), it->second.second);
  return out;
}

GraphSum Rewriter::reduce(GraphSum s, std::vector<TraceStep>* trace, bool* normal) const {
  int steps = 0;
  for (;;) {
    std::optional<TraceStep> next;
    int idx = 0;
    for (const auto& [k, t] : s.terms()) {
      next = reducing_site(t.first);
      if (next) {
        next->term = idx;
        break;
      }
      ++idx;
    }
    if (!next) break;
    if (++steps > budget_) {
      if (normal) *normal = false;
      return s;
    }
    s = apply_step(s, *next);
    if (trace) trace->push_back(*next);
  }
  for (const auto& [k, t] : s.terms())
    if (!t.first.floating.empty() && normal) *normal = false;
  return s;
}

// ---------------------------------------------------------------------------
// KLR sector.

namespace {

using Word = std::vector<int>;

// Final arrangement of strands after the word, read bottom to top.
std::vector<int> arrangement(int n, const Word& w) {
  std::vector<int> p(n);
  for (int k = 0; k < n; ++k) p[k] = k;
  for (int k : w) std::swap(p[k], p[k + 1]);
  return p;
}

bool is_reduced(int n, const Word& w) {
  std::vector<int> p = arrangement(n, w);
  int inv = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) inv += p[a] > p[b];
  return inv == static_cast<int>(w.size());
}

// Reduced words of one element, explored from a start word by commutations
// and braid moves. Crossing ids follow the letters as long as only
// commutations were used.
struct WordClass {
  std::vector<Word> words;
  std::vector<int> parent, q;
  std::vector<char> braid, pure;
  std::vector<std::vector<int>> ids;

  WordClass(const Word& w, const std::vector<int>& id, std::mt19937_64* rng) {
    std::map<Word, int> seen;
    push(w, -1, -1, false, true, id, seen);
    for (std::size_t at = 0; at < words.size() && words.size() < 200000; ++at) {
      const Word cur = words[at];
      const int L = static_cast<int>(cur.size());
      std::vector<int> order;
      for (int k = 0; k + 1 < L; ++k) order.push_back(k);
      if (rng) std::shuffle(order.begin(), order.end(), *rng);
      for (int k : order) {
        if (std::abs(cur[k] - cur[k + 1]) >= 2) {
          Word nw = cur;
          std::swap(nw[k], nw[k + 1]);
          std::vector<int> nid = ids[at];
          if (pure[at]) std::swap(nid[k], nid[k + 1]);
          push(nw, static_cast<int>(at), k, false, pure[at], nid, seen);
        }
        if (k + 2 < L && cur[k] == cur[k + 2] && std::abs(cur[k] - cur[k + 1]) == 1) {
          Word nw = cur;
          nw[k] = nw[k + 2] = cur[k + 1];
          nw[k + 1] = cur[k];
          push(nw, static_cast<int>(at), k, true, false, ids[at], seen);
        }
      }
    }
  }

  void push(const Word& w, int par, int k, bool br, bool pu, const std::vector<int>& id, std::map<Word, int>& seen) {
    if (seen.count(w)) return;
    seen[w] = static_cast<int>(words.size());
    words.push_back(w);
    parent.push_back(par);
    q.push_back(k);
    braid.push_back(br);
    pure.push_back(pu);
    ids.push_back(id);
  }

  // First braid move on the path to `target`: (node before it, position);
  // nullopt when the path only commutes letters.
  std::optional<std::pair<int, int>> first_braid(int target) const {
    std::vector<int> path;
    for (int x = target; x >= 0; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    for (std::size_t k = 1; k < path.size(); ++k)
      if (braid[path[k]]) return std::make_pair(path[k - 1], q[path[k]]);
    return std::nullopt;
  }
};

bool upward_graph(const PlanarGraph& g) {
  if (!g.floating.empty() || !g.decos.empty()) return false;
  const int nb = static_cast<int>(g.bottom().size());
  for (const Strand& x : g.bottom())
    if (x.sign < 0) return false;
  for (const Strand& x : g.top())
    if (x.sign < 0) return false;
  for (const PEdge& e : g.edges) {
    if (!e.alive) continue;
    if (e.tail.v == PEnd::kNone) return false;
    if (e.tail.v == PEnd::kBoundary && e.tail.slot >= nb) return false;
    if (e.head.v == PEnd::kBoundary && e.head.slot < nb) return false;
  }
  return true;
}

// Walking against the strand from edge e reaches a boundary point.
bool reaches_boundary_backwards(const PlanarGraph& g, int e) {
  const int start = e;
  for (std::size_t guard = 0; guard <= g.edges.size(); ++guard) {
    const PEnd& t = g.edges[e].tail;
    if (t.v == PEnd::kBoundary) return true;
    if (t.v == PEnd::kNone) return false;
    e = g.cross[t.v].edge[t.slot - 2];
    if (e == start) return false;
  }
  return false;
}

}  // namespace

std::optional<TraceStep> Rewriter::klr_site(const PlanarGraph& g, std::mt19937_64* rng) const {
  const CartanDatum& D = datum();
  std::vector<int> dotted;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const PEdge& x = g.edges[e];
    if (x.alive && x.dots > 0 && x.tail.v >= 0 && reaches_boundary_backwards(g, e)) dotted.push_back(e);
  }
  if (!dotted.empty()) {
    int e = rng ? dotted[(*rng)() % dotted.size()] : dotted.front();
    const PEnd& t = g.edges[e].tail;
    const PCross& c = g.cross[t.v];
    return TraceStep{c.a == c.b ? "dot_slide_ii" : "dot_slide_ij", 0, {t.v, t.slot}, colors(D, c.a, c.b)};
  }
  if (!upward_graph(g)) return std::nullopt;
  Diagram d = graph_to_diagram(g);
  if (!d.is_upward()) return std::nullopt;
  std::vector<int> gc;
  PlanarGraph h = graph_from_diagram(D, d, &gc);
  if (h.key() != g.key()) throw RewriteError("slice form does not reproduce the graph");
  Word w;
  std::vector<int> ids;
  for (std::size_t k = 0; k < d.gens().size(); ++k)
    if (gc[k] >= 0) {
      w.push_back(d.gens()[k].pos);
      ids.push_back(gc[k]);
    }
  const int n = static_cast<int>(g.bottom().size());
  auto braid_step = [&](const WordClass& wc, std::pair<int, int> at) {
    const Word& x = wc.words[at.first];
    const int k = at.second;
    const std::vector<int>& id = wc.ids[at.first];
    TraceStep st{"", 0, {id[k], id[k + 1], id[k + 2]}, ""};
    Sites all = find_sites(g);
    auto it = std::find_if(all.triangles.begin(), all.triangles.end(), [&](const Triangle& t) {
      return t.u == id[k] && t.v == id[k + 1] && t.w == id[k + 2] && t.p == (x[k + 1] == x[k] + 1);
    });
    if (it == all.triangles.end()) throw RewriteError("braid move has no triangle in the graph");
    int i, j;
    st.rule = r3_is_hard(D, g, *it, &i, &j) ? "r3_hard" : "r3_easy";
    st.bindings = colors(D, i, j);
    return st;
  };
  for (std::size_t p = 1; p <= w.size(); ++p) {
    Word pre(w.begin(), w.begin() + static_cast<long>(p));
    if (!is_reduced(n, pre)) {
      // Bring the previous letters to a word ending in the new one; the two
      // crossings then bound a bigon.
      Word prev(w.begin(), w.begin() + static_cast<long>(p - 1));
      WordClass wc(prev, std::vector<int>(ids.begin(), ids.begin() + static_cast<long>(p - 1)), rng);
      for (std::size_t t = 0; t < wc.words.size(); ++t)
        if (wc.words[t].back() == w[p - 1]) {
          auto at = wc.first_braid(static_cast<int>(t));
          if (!at) return std::nullopt;  // already a bigon; left to the reducing rules
          return braid_step(wc, *at);
        }
      throw RewriteError("non-reduced word without a matching descent");
    }
    WordClass wc(pre, std::vector<int>(ids.begin(), ids.begin() + static_cast<long>(p)), rng);
    int best = 0;
    for (std::size_t t = 1; t < wc.words.size(); ++t)
      if (wc.words[t] < wc.words[best]) best = static_cast<int>(t);
    if (auto at = wc.first_braid(best)) return braid_step(wc, *at);
  }
  return std::nullopt;
}

GraphSum Rewriter::sector_reduce(GraphSum s, std::vector<TraceStep>* trace, bool* normal, std::mt19937_64* rng) const {
  int steps = 0;
  for (;;) {
    s = reduce(std::move(s), trace, normal);
    std::vector<TraceStep> cands;
    int idx = 0;
    for (const auto& [k, t] : s.terms()) {
      if (auto st = klr_site(t.first, rng)) {
        st->term = idx;
        cands.push_back(*st);
        if (!rng) break;
      }
      ++idx;
    }
    if (cands.empty()) return s;
    if (++steps > budget_) {
      if (normal) *normal = false;
      return s;
    }
    const TraceStep& st = rng ? cands[(*rng)() % cands.size()] : cands.front();
    s = apply_step(s, st);
    if (trace) trace->push_back(st);
  }
}

NormalForm Rewriter::normalize(const Morphism& m, Tier tier, std::uint64_t seed) const {
  NormalForm out;
  GraphSum s = to_graphs(datum(), m);
  if (tier == Tier::T3) s = reduce(settle(s), &out.trace.steps, &out.normal);
  if (tier == Tier::T2) {
    std::mt19937_64 gen(seed);
    s = sector_reduce(settle(s), &out.trace.steps, &out.normal, seed ? &gen : nullptr);
  }
  out.value = to_morphism(s, m.source(), m.target());
  return out;
}

GraphSum Rewriter::replay(const Morphism& m, const RewriteTrace& trace) const {
  GraphSum s = settle(to_graphs(datum(), m));
  for (const auto& step : trace.steps) s = apply_step(s, step);
  return s;
}

ProofResult Rewriter::prove_equal(const Morphism& a, const Morphism& b, int depth) const {
  ProofResult out;
  GraphSum s = to_graphs(datum(), a - b);
  out.residue = to_morphism(s, a.source(), a.target());
  if (s.is_zero()) {
    out.status = ProofStatus::Proved;
    return out;
  }
  if (depth < 1) return out;
  bool normal = true;
  std::vector<TraceStep> base;
  GraphSum r = sector_reduce(settle(s), &base, &normal);
  out.residue = to_morphism(r, a.source(), a.target());
  if (r.is_zero()) {
    out.status = ProofStatus::Proved;
    out.trace.steps = base;
    return out;
  }
  // Breadth-first over search moves. States keep their moves unreduced so
  // that an inserted bigon survives until the next move uses it.
  struct Node {
    GraphSum state;
    std::vector<TraceStep> trace;
  };
  constexpr std::size_t kWidth = 256;
  auto key_of = [](const GraphSum& g) {
    std::string k;
    for (const auto& [key, t] : g.terms()) k += key + "|" + t.second.render() + ";";
    return k;
  };
  std::set<std::string> seen{key_of(r)};
  std::vector<Node> frontier{{r, base}};
  for (int level = 2; level <= depth && !frontier.empty(); ++level) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      int idx = 0;
      for (const auto& [k, t] : node.state.terms()) {
        for (TraceStep mv : search_moves(t.first)) {
          mv.term = idx;
          Node child{apply_step(node.state, mv), node.trace};
          child.trace.push_back(mv);
          std::vector<TraceStep> tail;
          bool ok = true;
          GraphSum red = sector_reduce(child.state, &tail, &ok);
          if (red.is_zero()) {
            out.status = ProofStatus::Proved;
            out.trace.steps = child.trace;
            out.trace.steps.insert(out.trace.steps.end(), tail.begin(), tail.end());
            out.residue = Morphism(a.source(), a.target());
            return out;
          }
          if (next.size() < kWidth && seen.insert(key_of(child.state)).second) next.push_back(std::move(child));
        }
        ++idx;
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace ucyc
