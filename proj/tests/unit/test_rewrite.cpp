#include <string>

#include "doctest.h"
#include "ucyc/rewrite.hpp"
#include "ucyc/text.hpp"

using namespace ucyc;

namespace {

Weight W(const CartanDatum& D, std::vector<int> c) { return Weight::from_coords(D, std::move(c)); }

Morphism norm(const Rewriter& R, const Morphism& m) {
  NormalForm nf = R.normalize(m, Tier::T3);
  CHECK(nf.normal);
  return nf.value;
}

std::string repeat(const std::string& s, int n) {
  std::string out;
  for (int k = 0; k < n; ++k) out += s + " ; ";
  return out;
}

// Slices joined bottom to top, empty pieces skipped.
std::string stack(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += " ; ";
    out += p;
  }
  return out;
}

std::string dots(const std::string& slice, int n) {
  std::vector<std::string> v(n, slice);
  return stack(v);
}

}  // namespace

TEST_CASE("bubbles normalize to their values") {
  auto sl2 = CartanDatum::sl2();
  auto P = Parameters::symbolic(sl2);
  Rewriter R(P);
  for (int n = -3; n <= -1; ++n) {
    // ccw bubble with -<i,lambda>-1 dots
    Morphism lit_b =
        parse_morphism(sl2, "cup(fe,1) ; " + repeat("id(-1)|dot(+1)", -n - 1) + "cap(ef,1) @ [" + std::to_string(n) + "]");
    Weight w = W(sl2, {n});
    Morphism expect = Morphism::identity(lit_b.source()) * P.bubble_param(0, w).inverse();
    CHECK(norm(R, lit_b) == expect);
  }
  // Negative degree clockwise bubbles vanish.
  for (int n = 1; n <= 3; ++n)
    for (int d = 0; d < n - 1; ++d) {
      Morphism m =
          parse_morphism(sl2, "cup(ef,1) ; " + repeat("dot(+1)|id(-1)", d) + "cap(fe,1) @ [" + std::to_string(n) + "]");
      CHECK(norm(R, m).is_zero());
    }
  // Any free loop agrees with the bubble calculus.
  BubbleCalculus calc(P);
  for (int n = -2; n <= 2; ++n)
    for (int d = 0; d <= 3; ++d) {
      Weight w = W(sl2, {n});
      Morphism cw =
          parse_morphism(sl2, "cup(ef,1) ; " + repeat("dot(+1)|id(-1)", d) + "cap(fe,1) @ [" + std::to_string(n) + "]");
      CHECK(norm(R, cw - calc.bubble(0, w, true, d - (n - 1)).to_morphism(sl2)).is_zero());
      Morphism ccw =
          parse_morphism(sl2, "cup(fe,1) ; " + repeat("id(-1)|dot(+1)", d) + "cap(ef,1) @ [" + std::to_string(n) + "]");
      CHECK(norm(R, ccw - calc.bubble(0, w, false, d - (-n - 1)).to_morphism(sl2)).is_zero());
    }
}

TEST_CASE("double crossings") {
  auto sl2 = CartanDatum::sl2();
  Rewriter R(Parameters::symbolic(sl2));
  CHECK(norm(R, parse_morphism(sl2, "x(+1,+1) ; x(+1,+1) @ [0]")).is_zero());
  auto a2 = CartanDatum::a2();
  auto P = Parameters::symbolic(a2);
  Rewriter R2(P);
  Morphism lhs = parse_morphism(a2, "x(+1,+2) ; x(+2,+1) @ [0,0]");
  Morphism rhs = parse_morphism(a2, "dot(+1)|id(+2) @ [0,0]") * P.t(0, 1) + parse_morphism(a2, "id(+1)|dot(+2) @ [0,0]") * P.t(1, 0);
  CHECK(norm(R2, lhs) == rhs);
  // Commuting colors.
  auto a1a1 = CartanDatum(std::vector<int>{1, 2}, {{2, 0}, {0, 2}}, {1, 1});
  auto Q = Parameters::symbolic(a1a1);
  Rewriter R3(Q);
  CHECK(norm(R3, parse_morphism(a1a1, "x(+1,+2) ; x(+2,+1) @ [0,0]")) ==
        parse_morphism(a1a1, "id(+1)|id(+2) @ [0,0]") * Q.t(0, 1));
  // Mixed relation: an antiparallel bigon of different colors is the identity.
  CHECK(norm(R2, parse_morphism(a2, "x(+1,-2) ; x(-2,+1) @ [0,0]")) == parse_morphism(a2, "id(+1)|id(-2) @ [0,0]"));
  CHECK(norm(R2, parse_morphism(a2, "x(-1,+2) ; x(+2,-1) @ [0,0]")) == parse_morphism(a2, "id(-1)|id(+2) @ [0,0]"));
}

TEST_CASE("extended sl2 relations hold after normalization") {
  auto sl2 = CartanDatum::sl2();
  Rewriter R(Parameters::symbolic(sl2));
  for (int n = -3; n <= 3; ++n) {
    std::string at = " @ [" + std::to_string(n) + "]";
    // id_{EF} = -(double crossing) + sum cap(f3) ccw(f2) cup(f1)
    Morphism ef = parse_morphism(sl2, "id(+1)|id(-1)" + at) + parse_morphism(sl2, "x(+1,-1) ; x(-1,+1)" + at);
    for (int f1 = 0; f1 <= n - 1; ++f1)
      for (int f2 = 0; f1 + f2 <= n - 1; ++f2) {
        int f3 = n - 1 - f1 - f2;
        ef -= parse_morphism(sl2, stack({dots("dot(+1)|id(-1)", f3), "cap(fe,1)",
                                         "bub(ccw,1,spade+" + std::to_string(f2) + ")", "cup(ef,1)",
                                         dots("dot(+1)|id(-1)", f1)}) +
                                      at);
      }
    CHECK_MESSAGE(norm(R, ef).is_zero(), n);
    Morphism fe = parse_morphism(sl2, "id(-1)|id(+1)" + at) + parse_morphism(sl2, "x(-1,+1) ; x(+1,-1)" + at);
    for (int g1 = 0; g1 <= -n - 1; ++g1)
      for (int g2 = 0; g1 + g2 <= -n - 1; ++g2) {
        int g3 = -n - 1 - g1 - g2;
        fe -= parse_morphism(sl2, stack({dots("id(-1)|dot(+1)", g3), "cap(ef,1)",
                                         "bub(cw,1,spade+" + std::to_string(g2) + ")", "cup(fe,1)",
                                         dots("id(-1)|dot(+1)", g1)}) +
                                      at);
      }
    CHECK_MESSAGE(norm(R, fe).is_zero(), n);
  }
}

TEST_CASE("curls reduce to dots and bubbles") {
  auto sl2 = CartanDatum::sl2();
  Rewriter R(Parameters::symbolic(sl2));
  for (int n = -3; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m)
      for (CurlSide side : {CurlSide::Left, CurlSide::Right}) {
        Weight w = W(sl2, {n});
        Morphism lhs(curl_diagram(sl2, side, 0, w, m));
        Morphism rhs = curl_reduce(sl2, side, 0, w, m);
        CHECK_MESSAGE(norm(R, lhs - rhs).is_zero(), "n=" << n << " m=" << m << " left=" << (side == CurlSide::Left));
      }
}

TEST_CASE("bubbles slide through strands") {
  for (auto D : {CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2()}) {
    auto P = Parameters::symbolic(D);
    Rewriter R(P);
    BubbleCalculus calc(P);
    for (int i = 0; i < D.rank(); ++i)
      for (int j = 0; j < D.rank(); ++j)
        for (bool cw : {true, false})
          for (bool right : {true, false})
            for (int m = 0; m <= 2; ++m) {
              std::vector<int> c(D.rank(), 0);
              c[i] = cw ? 1 : -1;
              Weight w = W(D, c);
              Morphism lhs(bubble_beside_strand(D, i, j, w, cw, m, right, 0));
              Morphism rhs = bubble_slide(calc, i, j, w, cw, m, right,
                                                 BubbleCalculus::slide_is_expanded(cw, right) ? SlideForm::Expanded
                                                                                              : SlideForm::Inverted);
              CHECK(norm(R, lhs - rhs).is_zero());
            }
  }
}

TEST_CASE("trace lines round trip and replay") {
  TraceStep s{"r2_ij", 2, {3, 5}, "i=1 j=2"};
  CHECK(s.render() == "RULE r2_ij @ 2:3,5 {i=1 j=2}");
  TraceStep p = TraceStep::parse(s.render());
  CHECK(p.rule == s.rule);
  CHECK(p.term == 2);
  CHECK(p.site == s.site);
  CHECK(p.bindings == s.bindings);
  CHECK_THROWS_AS(TraceStep::parse("RULE x @ y"), RewriteError);

  auto sl2 = CartanDatum::sl2();
  Rewriter R(Parameters::symbolic(sl2));
  Morphism m(curl_diagram(sl2, CurlSide::Left, 0, W(sl2, {-1}), 2));
  NormalForm nf = R.normalize(m, Tier::T3);
  CHECK(!nf.trace.steps.empty());
  GraphSum again = R.replay(m, RewriteTrace::parse(nf.trace.render()));
  CHECK(to_morphism(again, m.source(), m.target()) == nf.value);
}
