#include "doctest.h"
#include "helpers.hpp"
#include "ucyc/planar.hpp"
#include "ucyc/text.hpp"

using namespace ucyc;

namespace {
PlanarGraph G(const CartanDatum& D, const std::string& s) { return graph_from_diagram(D, parse_diagram(D, s)); }
}  // namespace

TEST_CASE("isotopic diagrams give the same graph") {
  auto sl2 = CartanDatum::sl2();
  CHECK(G(sl2, "id(+1)|cup(fe,1) ; cap(fe,1)|id(+1) @ [0]").key() == G(sl2, "id(+1) @ [0]").key());
  CHECK(G(sl2, "id(-1)|cup(ef,1) ; cap(ef,1)|id(-1) @ [3]").key() == G(sl2, "id(-1) @ [3]").key());
  // A dot slides along a zigzag.
  CHECK(G(sl2, "id(+1)|cup(fe,1) ; id(+1)|dot(-1)|id(+1) ; cap(fe,1)|id(+1) @ [1]").key() ==
        G(sl2, "dot(+1) @ [1]").key());
  CHECK(G(sl2, "dot(+1) @ [1]").key() != G(sl2, "id(+1) @ [1]").key());
  // Sideways crossing drawn two ways.
  auto a2 = CartanDatum::a2();
  CHECK(G(a2, "x(-1,+2) @ [0,0]").key() ==
        G(a2, "id(-1)|id(+2)|cup(ef,1) ; id(-1)|x(+2,+1)|id(-1) ; cap(ef,1)|id(+2)|id(-1) @ [0,0]").key());
}

TEST_CASE("closed pieces become floating components and decorations") {
  auto sl2 = CartanDatum::sl2();
  PlanarGraph b = G(sl2, "bub(cw,1,spade+1) @ [2]");
  REQUIRE(b.decos.size() == 1);
  CHECK(b.decos[0].he == -1);
  PlanarGraph loop = G(sl2, "cup(ef,1) ; cap(fe,1) @ [2]");
  REQUIRE(loop.floating.size() == 1);
  CHECK(loop.floating[0].container_he == -1);
  CHECK(loop.floating[0].outer_he % 2 == 0);  // clockwise: outside on the left
  PlanarGraph ccw = G(sl2, "cup(fe,1) ; cap(ef,1) @ [2]");
  CHECK(ccw.floating[0].outer_he % 2 == 1);
  // A loop next to a strand sits in the face to the strand's right.
  PlanarGraph side = G(sl2, "id(+1)|cup(ef,1) ; id(+1)|cap(fe,1) @ [0]");
  REQUIRE(side.floating.size() == 1);
  FaceInfo f = side.faces();
  CHECK(f.geo_of(side.floating[0].container_he) == 0);
  // Nested loops: the inner one is contained in a face of the outer one.
  PlanarGraph nest = G(sl2, "cup(ef,1) ; id(+1)|cup(fe,1)|id(-1) ; id(+1)|cap(ef,1)|id(-1) ; cap(fe,1) @ [0]");
  REQUIRE(nest.floating.size() == 2);
  FaceInfo nf = nest.faces();
  CHECK(nf.ngeo == 3);
  // Opposite orientations: the innermost face is back at lambda.
  std::vector<int> seen;
  for (int x = 0; x < nf.ngeo; ++x) seen.push_back(nf.weight[x].pairing(0));
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<int>{-2, 0, 0});
}

TEST_CASE("graph to slices and back is the identity on graphs") {
  std::mt19937 rng(11);
  int checked = 0;
  for (auto D : {CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2()}) {
    for (int trial = 0; trial < 300; ++trial) {
      Diagram d = testing::random_diagram(D, rng);
      PlanarGraph g = graph_from_diagram(D, d);
      Diagram back = graph_to_diagram(g);
      CHECK(back.source() == d.source());
      CHECK(back.target() == d.target());
      CHECK(back.degree(D) == d.degree(D));
      CHECK_MESSAGE(graph_from_diagram(D, back).key() == g.key(), render_diagram(D, d));
      if (d.is_upward()) CHECK_MESSAGE(back.is_upward(), render_diagram(D, back));
      // Pivotality: rotating twice is an isotopy.
      Diagram r2 = rotate_dual(D, rotate_dual(D, d));
      CHECK(graph_from_diagram(D, r2).key() == g.key());
      ++checked;
    }
  }
  CHECK(checked == 900);
}

TEST_CASE("slices from graphs avoid needless cups") {
  auto sl2 = CartanDatum::sl2();
  for (const char* t : {"id(+1) @ [0]", "x(+1,+1) @ [0]", "cup(fe,1) @ [1]", "cap(ef,1) @ [-1]", "id(-1)|id(+1) @ [2]",
                        "x(-1,+1) @ [0]", "x(+1,+1) ; dot(+1)|id(+1) @ [0]"}) {
    Diagram d = parse_diagram(sl2, t);
    Diagram back = graph_to_diagram(graph_from_diagram(sl2, d));
    CHECK_MESSAGE(back.gens().size() == d.gens().size(), render_diagram(sl2, back));
  }
}

TEST_CASE("closed pieces are drawn back in their faces") {
  auto sl2 = CartanDatum::sl2();
  for (const char* t : {"bub(cw,1,spade+1) @ [2]", "cup(ef,1) ; cap(fe,1) @ [2]",
                        "cup(ef,1) ; id(+1)|cup(fe,1)|id(-1) ; id(+1)|id(-1)|bub(ccw,1,spade+2)|id(+1)|id(-1) ; "
                        "id(+1)|cap(ef,1)|id(-1) ; cap(fe,1) @ [0]",
                        "id(+1)|cup(ef,1) ; id(+1)|dot(+1)|id(-1) ; id(+1)|cap(fe,1) @ [0]",
                        "cup(fe,1) ; x(-1,+1) ; x(+1,-1) ; cap(ef,1) @ [1]"}) {
    PlanarGraph g = G(sl2, t);
    Diagram back = graph_to_diagram(g);
    CHECK_MESSAGE(graph_from_diagram(sl2, back).key() == g.key(), render_diagram(sl2, back));
    CHECK(back.degree(sl2) == parse_diagram(sl2, t).degree(sl2));
  }
}

TEST_CASE("random diagrams give consistent faces") {
  std::mt19937 rng(5);
  for (auto D : {CartanDatum::sl2(), CartanDatum::a2()}) {
    for (int trial = 0; trial < 300; ++trial) {
      Diagram d = testing::random_diagram(D, rng);
      CHECK_NOTHROW(graph_from_diagram(D, d).validate());
    }
  }
}

TEST_CASE("surgery: resolving a bigon") {
  auto a2 = CartanDatum::a2();
  PlanarGraph g = G(a2, "x(+1,+2) ; x(+2,+1) @ [0,0]");
  REQUIRE(g.cross.size() == 2);
  // Lower crossing is the one fed by the bottom ports.
  int u = g.edges[g.port_edge[0]].head.v;
  int v = 1 - u;
  Surgery s;
  s.site = {u, v};
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (g.edges[e].tail.v == u && g.edges[e].head.v == v) s.remove_edges.push_back(e);
  CHECK(s.remove_edges.size() == 2);
  s.links = {{{true, u, 0}, {true, v, 3}, 1}, {{true, u, 1}, {true, v, 2}, 0}};
  PlanarGraph r = apply_surgery(g, s);
  CHECK(r.key() == G(a2, "dot(+1)|id(+2) @ [0,0]").key());

  // Closing a curl: the loop edge becomes a free loop placed beside the strand.
  auto sl2 = CartanDatum::sl2();
  PlanarGraph c = G(sl2, "id(+1)|cup(ef,1) ; x(+1,+1)|id(-1) ; id(+1)|cap(fe,1) @ [0]");
  REQUIRE(c.cross.size() == 1);
  Surgery t;
  t.site = {0};
  // Strand in at BL, out at TL after smoothing; the loop edge TR -> BR closes up.
  t.links = {{{true, 0, 0}, {true, 0, 3}, 0}, {{true, 0, 1}, {true, 0, 2}, 0}};
  PlanarGraph r2 = apply_surgery(c, t);
  CHECK(r2.alive_crossings() == 0);
  REQUIRE(r2.floating.size() == 1);
  FaceInfo f = r2.faces();
  CHECK(f.geo_of(r2.floating[0].container_he) == 0);
  CHECK(r2.floating[0].outer_he % 2 == 0);  // a clockwise loop on the right
}
