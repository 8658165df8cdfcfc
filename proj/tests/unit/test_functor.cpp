#include <random>

#include "doctest.h"
#include "identities.hpp"
#include "ucyc/functor.hpp"
#include "ucyc/text.hpp"

using namespace ucyc;
using namespace ucyc::testing;

TEST_CASE("generator multipliers") {
  auto D = CartanDatum::a2();
  auto P = Parameters::symbolic(D);
  RescalingTable T(P);
  auto M = [&](const char* text) { return apply_M(T, parse_morphism(D, text)); };
  Weight w = Weight::from_coords(D, {1, -2});

  Morphism dot = parse_morphism(D, "dot(+1) @ [1,-2]");
  CHECK(M("dot(+1) @ [1,-2]") == dot);
  CHECK(M("cap(fe,1) @ [1,-2]") == parse_morphism(D, "cap(fe,1) @ [1,-2]") * P.bubble_param(0, w));
  CHECK(M("cup(fe,1) @ [1,-2]") == parse_morphism(D, "cup(fe,1) @ [1,-2]") * P.bubble_param(0, w).inverse());
  CHECK(M("cup(ef,1) @ [1,-2]") == parse_morphism(D, "cup(ef,1) @ [1,-2]"));
  CHECK(M("x(-1,-2) @ [1,-2]") == parse_morphism(D, "x(-1,-2) @ [1,-2]") * P.t(1, 0));
  CHECK(M("x(+2,-1) @ [1,-2]") == parse_morphism(D, "x(+2,-1) @ [1,-2]") * P.t(0, 1).inverse());
  CHECK(M("x(-2,+1) @ [1,-2]") == parse_morphism(D, "x(-2,+1) @ [1,-2]"));
  CHECK(M("bub(cw,2,spade+1) @ [1,-2]") == parse_morphism(D, "bub(cw,2,spade+1) @ [1,-2]") * P.bubble_param(1, w));
  CHECK(M("bub(ccw,2,spade-1) @ [1,-2]") == parse_morphism(D, "bub(ccw,2,spade-1) @ [1,-2]") * P.bubble_param(1, w).inverse());
}

TEST_CASE("the inverse undoes the rescaling and both are strict") {
  std::mt19937_64 rng(7);
  for (auto D : {CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2()}) {
    RescalingTable T(Parameters::symbolic(D));
    for (int trial = 0; trial < 200; ++trial) {
      Diagram d = random_diagram(D, rng, 6);
      Morphism m(d, Scalar(static_cast<long>(rng() % 9) - 4));
      CHECK(apply_M_inverse(T, apply_M(T, m)) == m);
      CHECK(apply_M(T, apply_M_inverse(T, m)) == m);

      // vertical: split the word
      std::size_t cut = d.gens().empty() ? 0 : rng() % (d.gens().size() + 1);
      Diagram bottom(d.source(), std::vector<Generator>(d.gens().begin(), d.gens().begin() + cut));
      Diagram top(bottom.target(), std::vector<Generator>(d.gens().begin() + cut, d.gens().end()));
      CHECK(apply_M(T, compose_v(Morphism(top), Morphism(bottom))) ==
            compose_v(apply_M(T, Morphism(top)), apply_M(T, Morphism(bottom))));

      // horizontal: a second diagram to the left
      Weight lw = d.source().codomain(D);
      Diagram left = random_diagram(D, rng, 4, &lw);
      CHECK(apply_M(T, compose_h(D, Morphism(left), Morphism(d))) ==
            compose_h(D, apply_M(T, Morphism(left)), apply_M(T, Morphism(d))));
    }
  }
}

TEST_CASE("displayed c-ratio identities") {
  for (auto D : {CartanDatum::a2(), CartanDatum::b2()}) {
    auto P = Parameters::symbolic(D);
    for (const Weight& w : weight_box(D, 2))
      for (const auto& row : c_ratio_identities(P, w)) CHECK_MESSAGE(row.residual.is_zero(), row.name << " " << row.weight);
  }
}

TEST_CASE("the rescaling preserves every relation") {
  for (auto D : {CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2()}) {
    RuleSet rs = RuleSet::install(Parameters::symbolic(D), 1);
    PreservationReport rep = verify_preservation(rs, D.rank() == 1 ? 3 : 1);
    CHECK_MESSAGE(rep.ok(), rep.render());
    CHECK(rep.rows.size() == rs.families().size());
  }
}

TEST_CASE("a wrong target coefficient is caught") {
  auto D = CartanDatum::a2();
  auto P = Parameters::symbolic(D);
  RescalingTable T(P);
  RuleSet rs = RuleSet::install(P, 0);
  int seen = 0;
  for (RelationInstance r : rs.instances_at("cyclic", Weight::from_coords(D, {0, 0}))) {
    if (r.colors[0] == r.colors[1]) continue;
    // the two mates carry different coefficients; swapping them must break the check
    r.variant = r.variant == "left" ? "right" : "left";
    Morphism image = apply_M(T, r.lhs) - apply_M(T, r.rhs);
    Scalar sl = target_side_scalar(P, r, true), sr = target_side_scalar(P, r, false);
    Scalar u = T.multiplier(r.lhs.terms().begin()->first) * sl.inverse();
    CHECK_FALSE((image - (r.lhs * sl - r.rhs * sr) * u).is_zero());
    ++seen;
  }
  CHECK(seen == 4);
}
