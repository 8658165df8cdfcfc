#include "ucyc/planar.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ucyc {

namespace {

bool in_slot(int slot) { return slot == 0 || slot == 1; }

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n = 0) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int add() {
    p.push_back(static_cast<int>(p.size()));
    return p.back();
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

PlanarGraph::PlanarGraph(const CartanDatum* datum, Seq bottom, Seq top, Weight lambda)
    : datum_(datum), bottom_(std::move(bottom)), top_(std::move(top)), lambda_(std::move(lambda)) {
  port_edge.assign(ports(), -1);
}

PEnd PlanarGraph::arrival(int h) const {
  const PEdge& e = edges[h >> 1];
  return (h & 1) ? e.tail : e.head;
}

PEnd PlanarGraph::departure(int h) const { return arrival(h ^ 1); }

int PlanarGraph::leaving(PEnd end) const {
  int e = end.v >= 0 ? cross[end.v].edge[end.slot] : port_edge[end.slot];
  return edges[e].tail == end ? 2 * e : 2 * e + 1;
}

int PlanarGraph::next(int h) const {
  PEnd a = arrival(h);
  if (a.v == PEnd::kNone) return h;
  if (a.v >= 0) return leaving({a.v, (a.slot + 3) % 4});
  return leaving({PEnd::kBoundary, (a.slot + 1) % ports()});
}

Strand PlanarGraph::port_strand(int port) const {
  int nb = static_cast<int>(bottom_.size());
  if (port < nb) return bottom_[port];
  return top_[ports() - 1 - port];
}

int PlanarGraph::alive_crossings() const {
  int n = 0;
  for (const auto& c : cross) n += c.alive ? 1 : 0;
  return n;
}

int PlanarGraph::designated_he() const {
  int n = ports();
  if (n == 0) return -1;
  int k = (static_cast<int>(bottom_.size()) - 1 + n) % n;
  int e = port_edge[k];
  PEnd end{PEnd::kBoundary, k};
  return edges[e].head == end ? 2 * e : 2 * e + 1;
}

namespace {

// Cycles only; shared by faces() and the surgery bookkeeping.
void trace_cycles(const PlanarGraph& g, std::vector<int>& cyc, std::vector<std::vector<int>>& cycles) {
  cyc.assign(g.he_count(), -1);
  cycles.clear();
  for (int h = 0; h < g.he_count(); ++h) {
    if (!g.edges[h >> 1].alive || cyc[h] >= 0) continue;
    int id = static_cast<int>(cycles.size());
    cycles.emplace_back();
    int x = h;
    do {
      if (cyc[x] >= 0) throw std::logic_error("face tracing: half-edge revisited");
      cyc[x] = id;
      cycles.back().push_back(x);
      x = g.next(x);
    } while (x != h);
  }
}

}  // namespace

FaceInfo PlanarGraph::faces() const {
  FaceInfo f;
  trace_cycles(*this, f.cyc, f.cycles);
  int nc = static_cast<int>(f.cycles.size());
  UnionFind uf(nc + 1);
  const int des = nc;
  if (ports() > 0) uf.unite(f.cyc[designated_he()], des);
  for (const auto& fl : floating) uf.unite(f.cyc[fl.outer_he], fl.container_he < 0 ? des : f.cyc[fl.container_he]);
  std::vector<int> id(nc + 1, -1);
  id[uf.find(des)] = 0;
  f.ngeo = 1;
  f.geo.assign(nc, 0);
  for (int c = 0; c < nc; ++c) {
    int r = uf.find(c);
    if (id[r] < 0) id[r] = f.ngeo++;
    f.geo[c] = id[r];
  }
  // Weights: the face on the left of a strand is the one on its right plus alpha.
  std::vector<std::vector<std::pair<int, int>>> adj(f.ngeo);  // (half-edge, target)
  for (int h = 0; h < he_count(); ++h) {
    if (!edges[h >> 1].alive) continue;
    adj[f.geo[f.cyc[h]]].push_back({h, f.geo[f.cyc[h ^ 1]]});
  }
  f.weight.assign(f.ngeo, Weight{});
  std::vector<char> seen(f.ngeo, 0);
  f.weight[0] = lambda_;
  seen[0] = 1;
  std::deque<int> q{0};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (auto [h, y] : adj[x]) {
      Weight w = f.weight[x].shifted(*datum_, edges[h >> 1].color, (h & 1) ? 1 : -1);
      if (!seen[y]) {
        seen[y] = 1;
        f.weight[y] = w;
        q.push_back(y);
      } else if (!(f.weight[y] == w)) {
        throw std::logic_error("inconsistent face weights");
      }
    }
  }
  for (int x = 0; x < f.ngeo; ++x)
    if (!seen[x]) throw std::logic_error("face not reachable from the designated face");
  return f;
}

std::vector<int> PlanarGraph::edge_components(int* count) const {
  int ne = static_cast<int>(edges.size());
  UnionFind uf(ne + 1);
  for (const auto& c : cross) {
    if (!c.alive) continue;
    for (int s = 1; s < 4; ++s) uf.unite(c.edge[s], c.edge[0]);
  }
  for (int e : port_edge) uf.unite(e, ne);
  std::vector<int> comp(ne, -1), id(ne + 1, -1);
  int n = 0;
  if (ports() > 0) id[uf.find(ne)] = n++;
  for (int e = 0; e < ne; ++e) {
    if (!edges[e].alive) continue;
    int r = uf.find(e);
    if (id[r] < 0) id[r] = n++;
    comp[e] = id[r];
  }
  if (count) *count = n;
  return comp;
}

namespace {

struct Labeling {
  std::vector<int> eorder, vorder;  // old ids in label order
  std::vector<int> enew, vnew;      // old id -> label, -1 if unreached
};

// Breadth-first numbering from seed edges, crossing slots in order.
void bfs_label(const PlanarGraph& g, const std::vector<int>& seeds, Labeling& L) {
  if (L.enew.empty()) {
    L.enew.assign(g.edges.size(), -1);
    L.vnew.assign(g.cross.size(), -1);
  }
  std::deque<int> q;
  auto visit_v = [&](PEnd end) {
    if (end.v >= 0 && L.vnew[end.v] < 0) {
      L.vnew[end.v] = static_cast<int>(L.vorder.size());
      L.vorder.push_back(end.v);
      q.push_back(end.v);
    }
  };
  auto visit_e = [&](int e) {
    if (L.enew[e] >= 0) return;
    L.enew[e] = static_cast<int>(L.eorder.size());
    L.eorder.push_back(e);
    visit_v(g.edges[e].tail);
    visit_v(g.edges[e].head);
  };
  for (int e : seeds) {
    visit_e(e);
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int s = 0; s < 4; ++s) visit_e(g.cross[v].edge[s]);
    }
  }
}

}  // namespace

// Canonical numbering. The boundary component is numbered from the ports;
// every closed component from the start half-edge on its outer cycle that
// gives the smallest description (nested contents included); siblings in a
// face are ordered by that description. Decorations are anchored to the
// smallest half-edge of their face.
std::vector<int> PlanarGraph::canonicalize() {
  FaceInfo f = faces();
  const int nfl = static_cast<int>(floating.size());
  const int ncyc = static_cast<int>(f.cycles.size());
  int ncomp = 0;
  std::vector<int> comp = edge_components(&ncomp);
  auto cyc_comp = [&](int c) { return comp[f.cycles[c][0] >> 1]; };
  std::vector<int> outer_cyc(nfl);
  std::vector<char> is_outer(ncyc, 0);
  std::vector<int> comp_fl(ncomp, -1);
  for (int k = 0; k < nfl; ++k) {
    outer_cyc[k] = f.cyc[floating[k].outer_he];
    is_outer[outer_cyc[k]] = 1;
    comp_fl[comp[floating[k].outer_he >> 1]] = k;
  }
  std::vector<int> owner(f.ngeo, -1);
  for (int c = 0; c < ncyc; ++c)
    if (!is_outer[c]) owner[f.geo[c]] = c;
  auto face_key = [&](int he) {
    int x = f.geo_of(he);
    return x == 0 ? -1 : owner[x];
  };
  std::map<int, std::vector<int>> kids;
  std::map<int, std::vector<BubbleSym>> face_decos;
  for (int k = 0; k < nfl; ++k) kids[face_key(floating[k].container_he)].push_back(k);
  for (const Deco& d : decos) face_decos[face_key(d.he)].push_back(d.sym);
  std::vector<std::vector<int>> comp_cycles(ncomp);
  for (int c = 0; c < ncyc; ++c) comp_cycles[cyc_comp(c)].push_back(c);

  std::vector<std::string> ckey(nfl);
  std::vector<int> cstart(nfl, -1);
  auto sym_str = [](const BubbleSym& s) {
    return "d" + std::to_string(s.color) + (s.cw ? "c" : "a") + std::to_string(s.m);
  };
  std::function<void(int)> solve = [&](int k) {
    int cp = comp[floating[k].outer_he >> 1];
    for (int c : comp_cycles[cp])
      for (int kid : kids[c]) solve(kid);
    std::string best;
    for (int h : f.cycles[outer_cyc[k]]) {
      Labeling L;
      bfs_label(*this, {h >> 1}, L);
      std::ostringstream o;
      o << "s" << (h & 1);
      for (int v : L.vorder) o << "X" << cross[v].a << "," << cross[v].b;
      auto end_str = [&](PEnd e) { return e.v >= 0 ? std::to_string(L.vnew[e.v]) + "." + std::to_string(e.slot) : "-"; };
      for (int e : L.eorder)
        o << "E" << end_str(edges[e].tail) << ">" << end_str(edges[e].head) << ":" << edges[e].color << "^"
          << edges[e].dots;
      std::vector<std::pair<int, std::string>> inside;
      for (int c : comp_cycles[cp]) {
        if (c == outer_cyc[k]) continue;
        int rep = INT32_MAX;
        for (int x : f.cycles[c]) rep = std::min(rep, 2 * L.enew[x >> 1] + (x & 1));
        std::vector<std::string> items;
        for (const auto& s : face_decos[c]) items.push_back(sym_str(s));
        for (int kid : kids[c]) items.push_back("f(" + ckey[kid] + ")");
        std::sort(items.begin(), items.end());
        std::string joined;
        for (const auto& s : items) joined += s + ";";
        inside.push_back({rep, joined});
      }
      std::sort(inside.begin(), inside.end());
      for (const auto& [rep, s] : inside) o << "[" << rep << ":" << s << "]";
      std::string s = o.str();
      if (cstart[k] < 0 || s < best) {
        best = s;
        cstart[k] = h;
      }
    }
    ckey[k] = best;
  };
  for (int k = 0; k < nfl; ++k)
    if (cstart[k] < 0) solve(k);

  // Global numbering: boundary component, then closed components face by face.
  Labeling G;
  bfs_label(*this, port_edge, G);
  std::vector<int> fl_order;
  auto rep_of = [&](int c) {
    int rep = INT32_MAX;
    for (int x : f.cycles[c]) rep = std::min(rep, 2 * G.enew[x >> 1] + (x & 1));
    return rep;
  };
  auto place_kids = [&](int oc) {
    std::vector<int> ks = kids[oc];
    std::stable_sort(ks.begin(), ks.end(), [&](int a, int b) { return ckey[a] < ckey[b]; });
    for (int k : ks) {
      bfs_label(*this, {cstart[k] >> 1}, G);
      fl_order.push_back(k);
    }
  };
  auto place_inside = [&](int cp, int skip) {
    std::vector<std::pair<int, int>> cs;
    for (int c : comp_cycles[cp])
      if (c != skip) cs.push_back({rep_of(c), c});
    std::sort(cs.begin(), cs.end());
    for (auto [rep, c] : cs) place_kids(c);
  };
  place_kids(-1);
  if (ports() > 0) place_inside(0, -1);
  for (std::size_t n = 0; n < fl_order.size(); ++n) {
    int k = fl_order[n];
    place_inside(comp[floating[k].outer_he >> 1], outer_cyc[k]);
  }
  std::vector<int> leftovers;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (edges[e].alive && G.enew[e] < 0) leftovers.push_back(e);
  bfs_label(*this, leftovers, G);

  auto map_he = [&](int h) { return 2 * G.enew[h >> 1] + (h & 1); };
  auto anchor = [&](int he) {
    int oc = face_key(he);
    return oc < 0 ? -1 : rep_of(oc);
  };
  std::vector<Floating> fl2;
  for (int k : fl_order) fl2.push_back({map_he(cstart[k]), anchor(floating[k].container_he)});
  std::vector<Deco> d2;
  for (const Deco& d : decos) d2.push_back({anchor(d.he), d.sym});
  std::sort(d2.begin(), d2.end(), [](const Deco& a, const Deco& b) {
    return a.he != b.he ? a.he < b.he : a.sym < b.sym;
  });
  auto map_end = [&](PEnd end) {
    if (end.v >= 0) end.v = G.vnew[end.v];
    return end;
  };
  std::vector<PEdge> ne2;
  for (int e : G.eorder) {
    PEdge x = edges[e];
    x.tail = map_end(x.tail);
    x.head = map_end(x.head);
    ne2.push_back(x);
  }
  std::vector<PCross> nc2;
  for (int v : G.vorder) {
    PCross c = cross[v];
    for (int s = 0; s < 4; ++s) c.edge[s] = G.enew[c.edge[s]];
    nc2.push_back(c);
  }
  for (int& e : port_edge) e = G.enew[e];
  edges = std::move(ne2);
  cross = std::move(nc2);
  floating = std::move(fl2);
  decos = std::move(d2);
  return G.vnew;
}

std::string PlanarGraph::key() const {
  std::ostringstream o;
  auto end_str = [&](PEnd e) {
    if (e.v == PEnd::kBoundary) return "p" + std::to_string(e.slot);
    if (e.v == PEnd::kNone) return std::string("-");
    return std::to_string(e.v) + "." + std::to_string(e.slot);
  };
  o << render_seq(*datum_, bottom_) << ">" << render_seq(*datum_, top_) << lambda_.render() << "|";
  for (const auto& c : cross)
    if (c.alive) o << "X" << c.a << "," << c.b;
  o << "|";
  for (const auto& e : edges)
    if (e.alive) o << "E" << end_str(e.tail) << ">" << end_str(e.head) << ":" << e.color << "^" << e.dots;
  o << "|B";
  for (auto [i, m] : des) o << i << "." << m << ",";
  for (const auto& d : decos) o << "|D" << d.he << ":" << d.sym.color << (d.sym.cw ? "c" : "a") << d.sym.m;
  for (const auto& f : floating) o << "|F" << f.outer_he << ":" << f.container_he;
  return o.str();
}

void PlanarGraph::validate() const {
  auto fail = [](const std::string& m) { throw std::logic_error("planar graph: " + m); };
  if (static_cast<int>(port_edge.size()) != ports()) fail("port table size");
  for (int k = 0; k < ports(); ++k) {
    int e = port_edge[k];
    if (e < 0 || !edges[e].alive) fail("dead port edge");
    Strand s = port_strand(k);
    bool bottom = k < static_cast<int>(bottom_.size());
    PEnd end{PEnd::kBoundary, k};
    bool tail = edges[e].tail == end;
    if (!tail && !(edges[e].head == end)) fail("port edge does not end at its port");
    // Bottom E strands start at the port; top E strands end there.
    if (tail != (bottom == (s.sign > 0))) fail("port orientation");
    if (edges[e].color != s.color) fail("port color");
  }
  for (int v = 0; v < static_cast<int>(cross.size()); ++v) {
    const PCross& c = cross[v];
    if (!c.alive) continue;
    for (int s = 0; s < 4; ++s) {
      int e = c.edge[s];
      if (e < 0 || !edges[e].alive) fail("crossing slot without edge");
      PEnd end{v, s};
      const PEdge& x = edges[e];
      if (in_slot(s) ? !(x.head == end) : !(x.tail == end)) fail("slot orientation");
      if (x.color != c.color_at(s)) fail("slot color");
    }
  }
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const PEdge& x = edges[e];
    if (!x.alive) continue;
    if ((x.tail.v == PEnd::kNone) != (x.head.v == PEnd::kNone)) fail("half-open edge");
    for (PEnd end : {x.tail, x.head}) {
      if (end.v >= 0 && (!cross[end.v].alive || cross[end.v].edge[end.slot] != e)) fail("edge end mismatch");
      if (end.v == PEnd::kBoundary && port_edge[end.slot] != e) fail("edge port mismatch");
    }
    if (x.dots < 0) fail("negative dots");
  }
  (void)faces();
}

// ---------------------------------------------------------------------------
// Slices to graph.

PlanarGraph graph_from_diagram(const CartanDatum& datum, const Diagram& d, std::vector<int>* gen_crossing) {
  Seq bottom = d.source().seq;
  Seq top = d.target_seq();
  PlanarGraph g(&datum, bottom, top, d.weight());
  const int nb = static_cast<int>(bottom.size());
  const int n = g.ports();

  struct Piece {
    PEnd tail, head;
    int color = 0;
    int dots = 0;
  };
  std::vector<Piece> pieces;
  UnionFind uf;
  struct Open {
    int piece;
    int sign;  // +1: the open end is the head (strand flows up)
  };
  std::vector<Open> cur;
  struct Ref {
    int piece = -1;  // -1: designated face
    int dir = 0;
  };
  struct CupRecord {
    int piece;
    Ref outer, container;
  };
  std::vector<CupRecord> cups;
  std::vector<std::pair<Ref, BubbleSym>> bubbles;

  auto new_piece = [&](int color) {
    pieces.push_back({PEnd{}, PEnd{}, color, 0});
    return uf.add();
  };
  auto region_ref = [&](int r) -> Ref {
    int len = static_cast<int>(cur.size());
    if (r > 0) return {cur[r - 1].piece, cur[r - 1].sign > 0 ? 1 : 0};
    if (r < len) return {cur[r].piece, cur[r].sign > 0 ? 0 : 1};
    return {};
  };
  // Attach the open end of cur[k] to `end`.
  auto attach = [&](const Open& o, PEnd end) {
    Piece& p = pieces[uf.find(o.piece)];
    if (o.sign > 0)
      p.head = end;
    else
      p.tail = end;
  };

  for (int k = 0; k < nb; ++k) {
    int p = new_piece(bottom[k].color);
    PEnd end{PEnd::kBoundary, k};
    if (bottom[k].sign > 0)
      pieces[p].tail = end;
    else
      pieces[p].head = end;
    cur.push_back({p, bottom[k].sign});
  }

  std::vector<PCross> crosses;
  std::vector<int> gen_v;
  for (const Generator& gen : d.gens()) {
    int p = gen.pos;
    gen_v.push_back(static_cast<int>(crosses.size()));
    switch (gen.kind) {
      case Gen::Dot:
        pieces[uf.find(cur[p].piece)].dots += 1;
        break;
      case Gen::CrossUU:
      case Gen::CrossDD:
      case Gen::CrossFE:
      case Gen::CrossEF: {
        int s = gen.kind == Gen::CrossUU ? 0 : gen.kind == Gen::CrossEF ? 1 : gen.kind == Gen::CrossDD ? 2 : 3;
        int v = static_cast<int>(crosses.size());
        PCross c;
        Strand in0 = gen.inputs()[0], in1 = gen.inputs()[1];
        int slot_in[2] = {s, (s + 1) % 4};
        int colors[2] = {in0.color, in1.color};
        for (int t = 0; t < 2; ++t) (slot_in[t] % 2 == 0 ? c.a : c.b) = colors[t];
        crosses.push_back(c);
        attach(cur[p], {v, slot_in[0]});
        attach(cur[p + 1], {v, slot_in[1]});
        int slot_out[2] = {(s + 3) % 4, (s + 2) % 4};
        Open outs[2];
        for (int t = 0; t < 2; ++t) {
          int sl = slot_out[t];
          int q = new_piece(crosses[v].color_at(sl));
          bool tail_here = !in_slot(sl);
          if (tail_here)
            pieces[q].tail = {v, sl};
          else
            pieces[q].head = {v, sl};
          outs[t] = {q, tail_here ? 1 : -1};
        }
        cur[p] = outs[0];
        cur[p + 1] = outs[1];
        break;
      }
      case Gen::CupPEF:
      case Gen::CupPFE: {
        int q = new_piece(gen.i);
        Ref container = region_ref(p);
        int left_sign = gen.kind == Gen::CupPEF ? -1 : 1;
        cups.push_back({q, {q, left_sign > 0 ? 0 : 1}, container});
        cur.insert(cur.begin() + p, {{q, left_sign}, {q, -left_sign}});
        break;
      }
      case Gen::CapCEF:
      case Gen::CapCFE: {
        Open a = cur[p], b = cur[p + 1];
        Open up = a.sign > 0 ? a : b;    // open end is a head
        Open down = a.sign > 0 ? b : a;  // open end is a tail
        int ru = uf.find(up.piece), rd = uf.find(down.piece);
        if (ru == rd) {
          pieces[ru].head = PEnd{};
          pieces[ru].tail = PEnd{};
        } else {
          Piece merged = pieces[ru];
          merged.head = pieces[rd].head;
          merged.dots += pieces[rd].dots;
          uf.p[rd] = ru;
          pieces[ru] = merged;
        }
        cur.erase(cur.begin() + p, cur.begin() + p + 2);
        break;
      }
      case Gen::Bubble:
        bubbles.push_back({region_ref(p), BubbleSym{gen.i, gen.cw, gen.m}});
        break;
    }
  }
  int nt = static_cast<int>(top.size());
  for (int t = 0; t < nt; ++t) attach(cur[t], {PEnd::kBoundary, n - 1 - t});

  // Roots become edges.
  std::vector<int> eid(pieces.size(), -1);
  for (int q = 0; q < static_cast<int>(pieces.size()); ++q) {
    if (uf.find(q) != q) continue;
    eid[q] = static_cast<int>(g.edges.size());
    g.edges.push_back({pieces[q].tail, pieces[q].head, pieces[q].color, pieces[q].dots, true});
  }
  g.cross = crosses;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    for (PEnd end : {g.edges[e].tail, g.edges[e].head}) {
      if (end.v >= 0) g.cross[end.v].edge[end.slot] = e;
      if (end.v == PEnd::kBoundary) g.port_edge[end.slot] = e;
    }
  }
  auto he = [&](Ref r) { return r.piece < 0 ? -1 : 2 * eid[uf.find(r.piece)] + r.dir; };

  int ncomp = 0;
  std::vector<int> comp = g.edge_components(&ncomp);
  std::vector<char> placed(ncomp, 0);
  if (n > 0) placed[0] = 1;  // the boundary component
  for (const auto& c : cups) {
    int e = eid[uf.find(c.piece)];
    if (placed[comp[e]]) continue;
    placed[comp[e]] = 1;
    g.floating.push_back({he(c.outer), he(c.container)});
  }
  for (const auto& [r, sym] : bubbles) g.decos.push_back({he(r), sym});
  std::vector<int> vnew = g.canonicalize();
  g.validate();
  if (gen_crossing) {
    gen_crossing->clear();
    for (std::size_t k = 0; k < d.gens().size(); ++k) {
      Gen kind = d.gens()[k].kind;
      bool x = kind == Gen::CrossUU || kind == Gen::CrossDD || kind == Gen::CrossFE || kind == Gen::CrossEF;
      gen_crossing->push_back(x ? vnew[gen_v[k]] : -1);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Graph to slices: sweep a front upward from the bottom boundary. Cups are
// added only where the sweep needs them: a crossing with a single open input,
// a component that touches the top boundary alone, or a closed component.
// Bubbles and closed components are drawn as soon as their face opens up
// on the front.

std::pair<PlanarGraph, PlanarGraph> split_floating(const PlanarGraph& g, int index) {
  FaceInfo f = g.faces();
  int ncomp = 0;
  std::vector<int> comp = g.edge_components(&ncomp);
  const Floating& top = g.floating.at(index);
  std::vector<char> take_comp(ncomp, 0), inner_geo(f.ngeo, 0);
  std::vector<char> take_fl(g.floating.size(), 0);
  auto absorb = [&](int k) {
    take_fl[k] = 1;
    int c = comp[g.floating[k].outer_he >> 1];
    take_comp[c] = 1;
    int outer = f.geo_of(g.floating[k].outer_he);
    for (int h = 0; h < g.he_count(); ++h)
      if (g.edges[h >> 1].alive && comp[h >> 1] == c && f.geo_of(h) != outer) inner_geo[f.geo_of(h)] = 1;
  };
  absorb(index);
  for (bool more = true; more;) {
    more = false;
    for (int k = 0; k < static_cast<int>(g.floating.size()); ++k) {
      if (take_fl[k] || g.floating[k].container_he < 0 || !inner_geo[f.geo_of(g.floating[k].container_he)]) continue;
      absorb(k);
      more = true;
    }
  }
  Weight w = f.weight[f.geo_of(top.outer_he)];
  PlanarGraph inner(&g.datum(), {}, {}, w);
  PlanarGraph rest = g;
  std::vector<int> emap(g.edges.size(), -1), vmap(g.cross.size(), -1);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (!g.edges[e].alive || !take_comp[comp[e]]) continue;
    emap[e] = static_cast<int>(inner.edges.size());
    inner.edges.push_back(g.edges[e]);
    rest.edges[e].alive = false;
  }
  for (int v = 0; v < static_cast<int>(g.cross.size()); ++v) {
    if (!g.cross[v].alive || !take_comp[comp[g.cross[v].edge[0]]]) continue;
    vmap[v] = static_cast<int>(inner.cross.size());
    PCross c = g.cross[v];
    for (int& e : c.edge) e = emap[e];
    inner.cross.push_back(c);
    rest.cross[v].alive = false;
  }
  for (PEdge& x : inner.edges)
    for (PEnd* end : {&x.tail, &x.head})
      if (end->v >= 0) end->v = vmap[end->v];
  auto map_he = [&](int h) { return 2 * emap[h >> 1] + (h & 1); };
  rest.floating.clear();
  for (int k = 0; k < static_cast<int>(g.floating.size()); ++k) {
    Floating fl = g.floating[k];
    if (!take_fl[k]) {
      rest.floating.push_back(fl);
      continue;
    }
    fl.outer_he = map_he(fl.outer_he);
    fl.container_he = k == index ? -1 : map_he(fl.container_he);
    inner.floating.push_back(fl);
  }
  rest.decos.clear();
  for (const Deco& d : g.decos) {
    if (d.he >= 0 && inner_geo[f.geo_of(d.he)])
      inner.decos.push_back({map_he(d.he), d.sym});
    else
      rest.decos.push_back(d);
  }
  inner.canonicalize();
  rest.canonicalize();
  return {inner, rest};
}

namespace {

class Sweeper {
 public:
  explicit Sweeper(const PlanarGraph& g)
      : g_(g), f_(g.faces()), seen_(g.edges.size(), 0), placed_(g.cross.size(), 0), done_geo_(f_.ngeo, 0) {}

  Diagram run() {
    const int nb = static_cast<int>(g_.bottom().size());
    nb_ = nb;
    for (int p = 0; p < nb; ++p) {
      int e = g_.port_edge[p];
      front_.push_back({e, g_.edges[e].tail == PEnd{PEnd::kBoundary, p}, PEnd{PEnd::kBoundary, p}});
    }
    for (int p = 0; p < nb; ++p) emit_dots(p);
    if (g_.ports() == 0) {
      // Closed picture: draw every outermost component in turn.
      open_gaps();
      for (int k = 0; k < static_cast<int>(g_.floating.size()); ++k)
        if (g_.floating[k].container_he < 0) draw_closed(k, 0);
    } else {
      sweep();
    }
    Diagram out({g_.bottom(), g_.lambda(), 0}, gens_);
    if (out.target_seq() != g_.top()) throw std::logic_error("graph_to_diagram: sweep ended off the top boundary");
    return out;
  }

  // Closed graph with one outermost component: start it with a cup.
  Diagram run_closed() {
    nb_ = 0;
    open_gaps();
    auto it = std::find_if(g_.floating.begin(), g_.floating.end(), [](const Floating& x) { return x.container_he < 0; });
    int e = it->outer_he >> 1;
    const Floating& fl = *it;
    bool even = (fl.outer_he & 1) == 0;
    gens_.push_back(Generator::cupcap(even ? Gen::CupPFE : Gen::CupPEF, 0, g_.edges[e].color));
    front_ = {Elem{e, even}, Elem{e, !even}};
    emit_dots(0);
    sweep();
    return Diagram({{}, g_.lambda(), 0}, gens_);
  }

 private:
  struct Elem {
    int edge;
    bool up;  // moving along the edge (towards its head)
    PEnd from{};  // end it started from; kNone for a cup leg
  };

  int sign_of(const Elem& x) const { return x.up ? 1 : -1; }
  PEnd target(const Elem& x) const { return x.up ? g_.edges[x.edge].head : g_.edges[x.edge].tail; }
  // Adjacent pieces of one edge that run into each other (not two legs of one cup).
  bool meeting(const Elem& a, const Elem& b) const {
    if (a.edge != b.edge) return false;
    if (g_.edges[a.edge].tail.v == PEnd::kNone) return true;
    return (b.from.v != PEnd::kNone && target(a) == b.from) || (a.from.v != PEnd::kNone && target(b) == a.from);
  }

  void emit_dots(int pos) {
    const Elem& x = front_[pos];
    if (seen_[x.edge]) return;
    seen_[x.edge] = 1;
    for (int k = 0; k < g_.edges[x.edge].dots; ++k)
      gens_.push_back(Generator::dot(pos, g_.edges[x.edge].color, sign_of(x)));
  }

  int gap_geo(int r) const {
    if (front_.empty()) return 0;
    if (r == 0) return f_.geo_of(2 * front_[0].edge + (front_[0].up ? 0 : 1));
    const Elem& x = front_[r - 1];
    return f_.geo_of(2 * x.edge + (x.up ? 1 : 0));
  }

  // Draw whatever sits in a face the first time it shows up between two front elements.
  void open_gaps() {
    for (int r = 0; r <= static_cast<int>(front_.size()); ++r) {
      int x = gap_geo(r);
      if (done_geo_[x]) continue;
      done_geo_[x] = 1;
      if (x == 0)
        for (auto [i, m] : g_.des) gens_.push_back(Generator::bubble(r, i, canonical_cw(g_.lambda(), i), m));
      for (const Deco& d : g_.decos)
        if (f_.geo_of(d.he) == x) gens_.push_back(Generator::bubble(r, d.sym.color, d.sym.cw, d.sym.m));
      if (x == 0 && g_.ports() == 0) continue;  // outermost closed pieces are drawn by run()
      for (int k = 0; k < static_cast<int>(g_.floating.size()); ++k)
        if (f_.geo_of(g_.floating[k].container_he) == x) draw_closed(k, r);
    }
  }

  void draw_closed(int k, int r) {
    PlanarGraph inner = split_floating(g_, k).first;
    Diagram d = Sweeper(inner).run_closed();
    for (Generator gen : d.gens()) {
      gen.pos += r;
      gens_.push_back(gen);
    }
  }

  int run_length(int k) const {
    PEnd t = target(front_[k]);
    int b = 1;
    while (k + b < static_cast<int>(front_.size())) {
      PEnd u = target(front_[k + b]);
      if (u.v != t.v || u.slot != (t.slot + b) % 4) break;
      ++b;
    }
    return b;
  }

  void sweep() {
    for (;;) {
      open_gaps();
      if (step_cap() || step_cross() || step_top_cup()) continue;
      break;
    }
  }

  bool step_cap() {
    for (int k = 0; k + 1 < static_cast<int>(front_.size()); ++k) {
      if (!meeting(front_[k], front_[k + 1])) continue;
      Gen cap = sign_of(front_[k]) > 0 ? Gen::CapCFE : Gen::CapCEF;
      gens_.push_back(Generator::cupcap(cap, k, g_.edges[front_[k].edge].color));
      front_.erase(front_.begin() + k, front_.begin() + k + 2);
      return true;
    }
    return false;
  }

  bool step_cross() {
    // Prefer a crossing whose two lower slots are both on the front.
    int k = -1, b = 0;
    for (int x = 0; x < static_cast<int>(front_.size()); ++x) {
      PEnd t = target(front_[x]);
      if (t.v < 0 || placed_[t.v]) continue;
      int r = run_length(x);
      if (r >= 2) {
        k = x;
        b = r;
        break;
      }
      if (k < 0) {
        k = x;
        b = 1;
      }
    }
    if (k < 0) return false;
    int v = target(front_[k]).v;
    const PCross& c = g_.cross[v];
    int s = target(front_[k]).slot;
    if (b == 1) {
      int sl = (s + 1) % 4;
      int e2 = c.edge[sl];
      bool into = in_slot(sl);
      gens_.push_back(Generator::cupcap(into ? Gen::CupPFE : Gen::CupPEF, k + 1, c.color_at(sl)));
      // front[k+1] feeds the crossing; front[k+2] runs on to the far end.
      front_.insert(front_.begin() + k + 1, {Elem{e2, into}, Elem{e2, !into}});
    }
    static const Gen kinds[4] = {Gen::CrossUU, Gen::CrossEF, Gen::CrossDD, Gen::CrossFE};
    gens_.push_back(Generator::cross(kinds[s], k, c.color_at(s), c.color_at((s + 1) % 4)));
    placed_[v] = 1;
    int outs[2] = {(s + 3) % 4, (s + 2) % 4};
    for (int o = 0; o < 2; ++o) front_[k + o] = {c.edge[outs[o]], !in_slot(outs[o]), PEnd{v, outs[o]}};
    if (b == 1) emit_dots(k + 2);
    for (int o = 0; o < 2; ++o) emit_dots(k + o);
    return true;
  }

  // Everything left on the front ends at the top: start the leftmost piece
  // that hangs from the top alone.
  bool step_top_cup() {
    const int n = g_.ports();
    int port = -1;
    for (int t = 0; t < n - nb_ && port < 0; ++t)
      if (!seen_[g_.port_edge[g_.top_port(t)]]) port = g_.top_port(t);
    if (port < 0) return false;
    int pos = 0;
    for (const Elem& x : front_)
      if (target(x).slot > port) ++pos;  // top ports further left have larger indices
    int e = g_.port_edge[port];
    bool head_here = g_.edges[e].head == PEnd{PEnd::kBoundary, port};
    gens_.push_back(Generator::cupcap(head_here ? Gen::CupPFE : Gen::CupPEF, pos, g_.edges[e].color));
    front_.insert(front_.begin() + pos, {Elem{e, head_here}, Elem{e, !head_here}});
    emit_dots(pos);
    return true;
  }

  const PlanarGraph& g_;
  FaceInfo f_;
  int nb_ = 0;
  std::vector<Generator> gens_;
  std::vector<Elem> front_;
  std::vector<char> seen_, placed_, done_geo_;
};

}  // namespace

Diagram graph_to_diagram(const PlanarGraph& g) { return Sweeper(g).run(); }

// ---------------------------------------------------------------------------
// Surgery. Faces are tracked through "origins": every surviving half-edge
// remembers the geometric face it bordered before, which is enough to place
// components that come loose and to carry decorations along.

PlanarGraph apply_surgery(const PlanarGraph& g0, const Surgery& s) {
  auto fail = [](const std::string& m) { throw std::logic_error("surgery: " + m); };
  FaceInfo pre = g0.faces();
  PlanarGraph g = g0;
  const int ne0 = static_cast<int>(g.edges.size());
  std::vector<char> in_site(g.cross.size(), 0);
  for (int v : s.site) {
    if (v < 0 || v >= static_cast<int>(g.cross.size()) || !g.cross[v].alive) fail("bad site crossing");
    in_site[v] = 1;
  }
  std::vector<char> removed(ne0, 0);
  for (int e : s.remove_edges) {
    const PEdge& x = g.edges[e];
    if (x.tail.v < 0 || x.head.v < 0 || !in_site[x.tail.v] || !in_site[x.head.v]) fail("removed edge leaves the site");
    if (x.dots != 0) fail("removed edge carries dots");
    removed[e] = 1;
    g.edges[e].alive = false;
  }
  std::map<std::pair<int, int>, int> dangle;
  for (int v : s.site) {
    for (int sl = 0; sl < 4; ++sl) {
      int e = g.cross[v].edge[sl];
      if (!removed[e]) dangle[{v, sl}] = e;
    }
    g.cross[v].alive = false;
  }
  const int base = static_cast<int>(g.cross.size());
  for (PCross c : s.add) {
    for (int& e : c.edge) e = -1;
    c.alive = true;
    g.cross.push_back(c);
  }
  UnionFind uf(ne0);
  std::set<std::pair<int, int>> used;
  auto up = [&](const SurgeryEnd& x) { return x.outer ? in_slot(x.slot) : !in_slot(x.slot); };
  auto color = [&](const SurgeryEnd& x) {
    if (x.outer) {
      auto it = dangle.find({x.v, x.slot});
      if (it == dangle.end()) fail("link uses a non-dangling slot");
      return g.edges[it->second].color;
    }
    return g.cross[base + x.v].color_at(x.slot);
  };
  auto take = [&](const SurgeryEnd& x) {
    int key = x.outer ? x.v : -1 - x.v;
    if (!used.insert({key, x.slot}).second) fail("endpoint used twice");
  };
  std::vector<std::pair<int, bool>> link_edge;  // (edge, walking x->y follows the strand)
  for (const auto& L : s.links) {
    take(L.x);
    take(L.y);
    if (up(L.x) == up(L.y)) fail("link joins two ends of the same direction");
    if (color(L.x) != color(L.y)) fail("link joins different colors");
    const SurgeryEnd& U = up(L.x) ? L.x : L.y;
    const SurgeryEnd& D = up(L.x) ? L.y : L.x;
    int result;
    if (U.outer && D.outer) {
      int eu = uf.find(dangle[{U.v, U.slot}]);
      int ed = uf.find(dangle[{D.v, D.slot}]);
      if (eu == ed) {
        g.edges[eu].tail = PEnd{};
        g.edges[eu].head = PEnd{};
        g.edges[eu].dots += L.dots;
      } else {
        PEdge& a = g.edges[eu];
        PEdge& b = g.edges[ed];
        a.head = b.head;
        a.dots += b.dots + L.dots;
        b.alive = false;
        uf.p[ed] = eu;
        if (a.head.v >= 0 && g.cross[a.head.v].alive) g.cross[a.head.v].edge[a.head.slot] = eu;
        if (a.head.v == PEnd::kBoundary) g.port_edge[a.head.slot] = eu;
      }
      result = eu;
    } else if (U.outer) {
      int eu = uf.find(dangle[{U.v, U.slot}]);
      g.edges[eu].head = {base + D.v, D.slot};
      g.edges[eu].dots += L.dots;
      g.cross[base + D.v].edge[D.slot] = eu;
      result = eu;
    } else if (D.outer) {
      int ed = uf.find(dangle[{D.v, D.slot}]);
      g.edges[ed].tail = {base + U.v, U.slot};
      g.edges[ed].dots += L.dots;
      g.cross[base + U.v].edge[U.slot] = ed;
      result = ed;
    } else {
      result = static_cast<int>(g.edges.size());
      g.edges.push_back({{base + U.v, U.slot}, {base + D.v, D.slot}, color(U), L.dots, true});
      uf.add();
      g.cross[base + U.v].edge[U.slot] = result;
      g.cross[base + D.v].edge[D.slot] = result;
    }
    link_edge.push_back({result, up(L.x)});
  }
  for (const auto& [k, e] : dangle)
    if (!used.count({k.first, k.second})) fail("dangling end left open");
  for (int c = 0; c < static_cast<int>(s.add.size()); ++c)
    for (int sl = 0; sl < 4; ++sl)
      if (g.cross[base + c].edge[sl] < 0) fail("new crossing slot left open");

  // Origins of the surviving half-edges.
  std::vector<std::set<int>> origin(g.he_count());
  for (int e = 0; e < ne0; ++e) {
    if (!g0.edges[e].alive || removed[e]) continue;
    int r = uf.find(e);
    for (int d = 0; d < 2; ++d) origin[2 * r + d].insert(pre.geo_of(2 * e + d));
  }
  std::vector<int> cyc;
  std::vector<std::vector<int>> cycles;
  trace_cycles(g, cyc, cycles);
  const int nc = static_cast<int>(cycles.size());
  std::vector<std::set<int>> corig(nc);
  for (int c = 0; c < nc; ++c)
    for (int h : cycles[c]) corig[c].insert(origin[h].begin(), origin[h].end());
  int ncomp = 0;
  std::vector<int> comp = g.edge_components(&ncomp);
  std::vector<std::vector<int>> comp_cycles(ncomp);
  for (int c = 0; c < nc; ++c) comp_cycles[comp[cycles[c][0] >> 1]].push_back(c);
  auto rep = [&](int c) { return *std::min_element(cycles[c].begin(), cycles[c].end()); };
  auto meets = [](const std::set<int>& a, const std::set<int>& b) {
    for (int x : a)
      if (b.count(x)) return true;
    return false;
  };

  // Place components: the boundary component first, then anything sharing a
  // former face with something already placed.
  std::vector<char> placed(ncomp, 0);
  std::vector<int> placed_cycles;  // -1 stands for the unbounded face
  std::vector<Floating> floating;
  if (g.ports() > 0) {
    placed[0] = 1;
    placed_cycles = comp_cycles[0];
  } else {
    placed_cycles.push_back(-1);
  }
  const std::set<int> des_origin{0};
  for (bool progress = true; progress;) {
    progress = false;
    for (int k = 0; k < ncomp; ++k) {
      if (placed[k]) continue;
      for (int c : comp_cycles[k]) {
        int found = -2;
        for (int d : placed_cycles) {
          if (meets(corig[c], d < 0 ? des_origin : corig[d])) {
            found = d;
            break;
          }
        }
        if (found == -2) continue;
        floating.push_back({rep(c), found < 0 ? -1 : rep(found)});
        placed[k] = 1;
        placed_cycles.insert(placed_cycles.end(), comp_cycles[k].begin(), comp_cycles[k].end());
        progress = true;
        break;
      }
    }
  }
  for (int k = 0; k < ncomp; ++k)
    if (!placed[k]) fail("cannot locate a detached component");

  auto anchor_for = [&](int geo) -> int {
    if (geo == 0 && g.ports() == 0) return -1;
    for (int c : placed_cycles)
      if (c >= 0 && corig[c].count(geo)) return rep(c);
    if (geo == 0) return -1;
    fail("a decorated face disappeared");
    return -1;
  };
  std::vector<Deco> decos;
  for (const auto& d : g0.decos) decos.push_back({d.he < 0 ? -1 : anchor_for(pre.geo_of(d.he)), d.sym});
  for (const auto& b : s.bubbles) {
    auto [e, along] = link_edge.at(b.link);
    int r = uf.find(e);
    bool dir0 = along == b.left;
    decos.push_back({2 * r + (dir0 ? 0 : 1), b.sym});
  }
  g.floating = std::move(floating);
  g.decos = std::move(decos);
  g.canonicalize();
  g.validate();
  return g;
}

}  // namespace ucyc
