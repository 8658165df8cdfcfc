// Acceptance run: one PASS/FAIL line per criterion, each within its time budget.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "identities.hpp"
#include "ucyc/bubbles.hpp"
#include "ucyc/functor.hpp"
#include "ucyc/klr.hpp"
#include "ucyc/rewrite.hpp"
#include "ucyc/rules.hpp"
#include "ucyc/text.hpp"

using namespace ucyc;
using namespace ucyc::testing;

namespace {

// Collects failures; the first few are echoed under the criterion line.
struct Tally {
  long checks = 0;
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

const std::vector<CartanDatum>& standard_data() {
  static const std::vector<CartanDatum> d = {CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2()};
  return d;
}

std::string name_of(const CartanDatum& D) {
  if (D == CartanDatum::sl2()) return "sl2";
  if (D == CartanDatum::a2()) return "A2";
  if (D == CartanDatum::b2()) return "B2";
  return "rank" + std::to_string(D.rank());
}

Weight W(const CartanDatum& D, std::vector<int> c) { return Weight::from_coords(D, std::move(c)); }

// Weights with <i,lambda> = n and the other coordinates in {-1, 0, 1}.
std::vector<Weight> weights_with(const CartanDatum& D, int i, int n) {
  std::vector<Weight> out;
  for (const Weight& w : weight_box(D, 1)) {
    std::vector<int> c = w.coords;
    c[i] = n;
    Weight x = W(D, c);
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

bool zero_under_t3(const Rewriter& R, const Morphism& m) {
  NormalForm nf = R.normalize(m, Tier::T3);
  return nf.normal && nf.value.is_zero();
}

// ---------------------------------------------------------------------------

void homogeneity(Tally& t) {
  for (const auto& D : standard_data()) {
    try {
      RuleSet rs = RuleSet::install(Parameters::symbolic(D), 4);
      long n = 0;
      for (const auto& f : rs.families()) n += static_cast<long>(rs.instances(f.name, 4).size());
      t.expect(rs.families().size() == 17, name_of(D) + ": expected 17 families");
      t.checks += n;
    } catch (const RuleError& e) {
      t.expect(false, name_of(D) + ": " + e.what());
    }
  }
}

void functor(Tally& t) {
  for (const auto& D : standard_data()) {
    Parameters P = Parameters::symbolic(D);
    const int range = D.rank() == 1 ? 4 : 2;
    RuleSet rs = RuleSet::install(P, range);
    PreservationReport rep = verify_preservation(rs, range);
    for (const auto& row : rep.rows) {
      t.checks += row.instances;
      if (row.failures) t.failures.push_back(name_of(D) + " " + row.family + ": " + row.first_failure);
    }
    bool cyc = false, side = false, shift = false;
    for (const auto& id : rep.identities) {
      t.expect(id.residual.is_zero(), name_of(D) + " " + id.name + " at " + id.weight + ": " + id.residual.render());
      cyc = cyc || id.name.rfind("dd cyclicity ratio", 0) == 0;
      side = side || id.name.rfind("left sideways ratio", 0) == 0;
      shift = shift || id.name.rfind("weight shift ratio", 0) == 0;
    }
    if (D.rank() > 1) t.expect(cyc && side && shift, name_of(D) + ": displayed c-ratio identities were not evaluated");
  }
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 500; ++k) {
    const CartanDatum& D = standard_data()[k % 3];
    RescalingTable T(Parameters::symbolic(D));
    Morphism m(random_diagram(D, rng, 7), Scalar(static_cast<long>(rng() % 11) - 5));
    Diagram extra = random_diagram(D, rng, 7);
    if (extra.source() == m.source() && extra.target() == m.target()) m.add(extra, Scalar(3));
    t.expect(apply_M_inverse(T, apply_M(T, m)) == m, "inverse after M differs on " + render_morphism(D, m));
  }
}

// Every generator at weights in [-2,2]: the double dual normalizes back to it.
void pivotal(Tally& t) {
  for (const auto& D : standard_data()) {
    Rewriter R(Parameters::symbolic(D));
    for (const Weight& w : weight_box(D, 2)) {
      std::vector<std::string> gens;
      for (int a = 0; a < D.rank(); ++a) {
        const std::string i = std::to_string(D.label(a));
        for (const char* s : {"+", "-"}) gens.push_back(std::string("dot(") + s + i + ")");
        for (const char* k : {"cup(fe,", "cup(ef,", "cap(fe,", "cap(ef,"}) gens.push_back(k + i + ")");
        for (const char* o : {"cw", "ccw"})
          for (int m = 0; m <= 2; ++m) gens.push_back(std::string("bub(") + o + "," + i + ",spade+" + std::to_string(m) + ")");
        for (int b = 0; b < D.rank(); ++b) {
          const std::string j = std::to_string(D.label(b));
          for (const char* s1 : {"+", "-"})
            for (const char* s2 : {"+", "-"}) gens.push_back(std::string("x(") + s1 + i + "," + s2 + j + ")");
        }
      }
      for (const auto& g : gens) {
        Morphism m = parse_morphism(D, g + " @ " + w.render());
        Morphism rr = rotate_dual(D, rotate_dual(D, m));
        t.expect(R.prove_equal(rr, m, 1).status == ProofStatus::Proved, name_of(D) + " " + g + " @ " + w.render());
      }
    }
  }
}

void grassmannian(Tally& t) {
  for (const auto& D : standard_data()) {
    BubbleCalculus calc(Parameters::symbolic(D));
    for (const Weight& w : weight_box(D, 4))
      for (int i = 0; i < D.rank(); ++i)
        for (int N = 1; N <= 6; ++N)
          t.expect(calc.grassmannian_check(i, w, N), name_of(D) + " i=" + std::to_string(D.label(i)) + " " + w.render() +
                                                         " N=" + std::to_string(N));
  }
}

void curls(Tally& t) {
  for (const auto& D : {CartanDatum::sl2(), CartanDatum::a2()}) {
    Parameters P = Parameters::symbolic(D);
    Rewriter R(P);
    const int i = 0;
    for (int n = -3; n <= 3; ++n)
      for (const Weight& w : weights_with(D, i, n)) {
        // undotted values of the lemma
        Morphism l(curl_diagram(D, CurlSide::Left, i, w, 0));
        Morphism id_l = Morphism::identity(l.source());
        if (n == 0) t.expect(R.prove_equal(l, id_l * (-P.bubble_param(i, w)), 12).status == ProofStatus::Proved,
                             name_of(D) + " left curl at 0 " + w.render());
        if (n > 0) t.expect(R.prove_equal(l, id_l * Scalar(0), 12).status == ProofStatus::Proved,
                            name_of(D) + " left curl vanishes " + w.render());
        Morphism r(curl_diagram(D, CurlSide::Right, i, w, 0));
        Morphism id_r = Morphism::identity(r.source());
        if (n == 0) t.expect(R.prove_equal(r, id_r * P.bubble_param(i, w).inverse(), 12).status == ProofStatus::Proved,
                             name_of(D) + " right curl at 0 " + w.render());
        if (n < 0) t.expect(R.prove_equal(r, id_r * Scalar(0), 12).status == ProofStatus::Proved,
                            name_of(D) + " right curl vanishes " + w.render());
        // dotted curls
        for (int m = 0; m <= 3; ++m)
          for (CurlSide side : {CurlSide::Left, CurlSide::Right}) {
            Morphism c(curl_diagram(D, side, i, w, m));
            Morphism v = curl_reduce(D, side, i, w, m);
            ProofResult pr = R.prove_equal(c, v, 12);
            bool ok = pr.status == ProofStatus::Proved && R.replay(c - v, pr.trace).is_zero();
            t.expect(ok, name_of(D) + (side == CurlSide::Left ? " left" : " right") + " curl m=" + std::to_string(m) +
                             " " + w.render());
          }
      }
  }
}

std::map<std::pair<int, int>, Scalar> collect(const std::vector<SlideTerm>& ts) {
  std::map<std::pair<int, int>, Scalar> out;
  for (const auto& s : ts) {
    if (s.m < 0 || s.coeff.is_zero()) continue;
    out[{s.m, s.dots}] += s.coeff;
    if (out[{s.m, s.dots}].is_zero()) out.erase({s.m, s.dots});
  }
  return out;
}

void slides(Tally& t) {
  const CartanDatum a1a1({1, 2}, {{2, 0}, {0, 2}}, {1, 1});
  for (const auto& D : {CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2(), a1a1}) {
    Parameters P = Parameters::symbolic(D);
    Rewriter R(P);
    BubbleCalculus calc(P);
    for (int i = 0; i < D.rank(); ++i)
      for (int j = 0; j < D.rank(); ++j)
        for (int m = 0; m <= 4; ++m) {
          const std::string tag = name_of(D) + " i=" + std::to_string(D.label(i)) + " j=" + std::to_string(D.label(j)) +
                                  " m=" + std::to_string(m);
          for (bool cw : {true, false})
            for (bool right : {true, false}) {
              // expanded then inverted returns the bubble unchanged
              std::vector<SlideTerm> back;
              for (const auto& a : calc.slide_terms(i, j, cw, m, right)) {
                if (a.m < 0) continue;
                for (const auto& b : calc.slide_terms(i, j, cw, a.m, !right))
                  back.push_back({a.coeff * b.coeff, b.m, a.dots + b.dots});
              }
              auto got = collect(back);
              t.expect(got.size() == 1 && got.begin()->first == std::make_pair(m, 0) && got.begin()->second.is_one(),
                       tag + " round trip");
              // the diagrammatic identity at every weight
              for (int n = -3; n <= 3; ++n)
                for (const Weight& w : weights_with(D, i, n)) {
                  Morphism lhs(bubble_beside_strand(D, i, j, w, cw, m, right, 0));
                  Morphism rhs = bubble_slide(calc, i, j, w, cw, m, right,
                                              BubbleCalculus::slide_is_expanded(cw, right) ? SlideForm::Expanded
                                                                                           : SlideForm::Inverted);
                  t.expect(zero_under_t3(R, lhs - rhs), tag + (cw ? " cw" : " ccw") + (right ? " right " : " left ") +
                                                             w.render());
                }
            }
          if (i == j || D.a(i, j) < 0) {
            t.expect(collect(calc.inverted_slide_displayed(i, j, true, m)) == collect(calc.slide_terms(i, j, true, m, true)),
                     tag + " displayed inverted cw");
            t.expect(
                collect(calc.inverted_slide_displayed(i, j, false, m)) == collect(calc.slide_terms(i, j, false, m, false)),
                tag + " displayed inverted ccw");
          }
        }
  }
}

void triples(Tally& t) {
  for (const auto& D : {CartanDatum::a2(), CartanDatum::b2()}) {
    Parameters P = Parameters::symbolic(D);
    Rewriter R(P);
    for (const Weight& w : weight_box(D, 1)) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            if (i == j && j == k) continue;
            Identity id = triple_oriented(D, i, j, k, w);
            t.expect(R.prove_equal(id.lhs, id.rhs, 4).status == ProofStatus::Proved,
                     name_of(D) + " oriented " + std::to_string(i) + std::to_string(j) + std::to_string(k) + " " + w.render());
          }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (i == j || D.form(i, j) >= 0) continue;
          for (bool left : {true, false}) {
            Identity id = triple_hard(D, P, i, j, w, left);
            t.expect(R.prove_equal(id.lhs, id.rhs, 4).status == ProofStatus::Proved,
                     name_of(D) + (left ? " left" : " right") + " correction " + w.render());
          }
        }
    }
  }
}

void klr(Tally& t) {
  for (const auto& D : standard_data()) {
    Parameters P = Parameters::symbolic(D);
    RuleSet rs = RuleSet::install(P, 1);
    for (const char* fam : {"r2_ij", "dot_slide_ii", "dot_slide_ij", "r3_easy", "r3_hard"})
      for (const RelationInstance& r : rs.instances(fam, 1))
        t.expect(oracle_equal(P, r.lhs, r.rhs), name_of(D) + " " + fam + " " + r.tag);
  }
  std::mt19937_64 rng(99);
  int proved = 0, refuted = 0;
  for (int trial = 0; trial < 400 && proved < 200; ++trial) {
    const CartanDatum& D = standard_data()[trial % 3];
    Parameters P = Parameters::symbolic(D);
    Rewriter R(P);
    Morphism a(random_upward(D, rng, 1 + static_cast<int>(rng() % 3), 4, 3));
    // the partner is a rewritten form of a; every Proved pair must agree on polynomials
    Morphism b = R.normalize(a, Tier::T2, trial + 1).value;
    ProofResult pr = R.prove_equal(a, b, 2);
    if (pr.status != ProofStatus::Proved) continue;
    ++proved;
    t.expect(oracle_equal(P, a, b), name_of(D) + " proved but oracle disagrees: " + render_morphism(D, a));
    // control: a genuinely different partner must not be proved
    Morphism c = compose_v(Morphism(Diagram(a.target(), {Generator::dot(0, a.target().seq[0].color, 1)})), a);
    if (!oracle_equal(P, a, c)) {
      ++refuted;
      t.expect(R.prove_equal(a, c, 2).status == ProofStatus::Unknown, name_of(D) + " unequal pair proved");
    }
  }
  t.expect(proved == 200, "only " + std::to_string(proved) + " of 200 pairs proved");
  t.expect(refuted > 0, "no negative controls ran");
}

void bubble_values(Tally& t) {
  for (const auto& D : standard_data()) {
    Parameters P = Parameters::symbolic(D);
    Rewriter R(P);
    BubbleCalculus calc(P);
    RuleSet rs = RuleSet::install(P, 4);
    for (const char* fam : {"positivity", "degree_zero"})
      for (const RelationInstance& r : rs.instances(fam, 4))
        t.expect(zero_under_t3(R, r.lhs - r.rhs), name_of(D) + " " + fam + " " + r.tag);
    for (const Weight& w : weight_box(D, 4))
      for (int i = 0; i < D.rank(); ++i) {
        const int n = w.pairing(i);
        const Scalar c = P.bubble_param(i, w);
        if (n >= 1) t.expect(calc.degree_zero(i, w, true) == c, name_of(D) + " cw degree zero " + w.render());
        if (n <= -1) t.expect(calc.degree_zero(i, w, false) == c.inverse(), name_of(D) + " ccw degree zero " + w.render());
        // a real bubble below degree zero vanishes
        if (n >= 1) t.expect(calc.bubble(i, w, true, -1).is_zero(), name_of(D) + " negative cw " + w.render());
        if (n <= -1) t.expect(calc.bubble(i, w, false, -1).is_zero(), name_of(D) + " negative ccw " + w.render());
      }
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Tally&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "relation families are degree-homogeneous (sl2, A2, B2; <i,lambda> in [-4,4])", 60, homogeneity},
      {2, "rescaling functor preserves every relation; inverse after M is the identity on 500 morphisms", 300, functor},
      {3, "double dual of every generator normalizes back to it", 60, pivotal},
      {4, "infinite Grassmannian truncations N <= 6, <i,lambda> in [-4,4]", 120, grassmannian},
      {5, "curl values and dotted curls proved at depth <= 12", 600, curls},
      {6, "bubble slides (i=j, a_ij<0, a_ij=0), m <= 4, inverted forms and round trips", 600, slides},
      {7, "triple intersections on A2 and B2", 600, triples},
      {8, "KLR relations act trivially; 200 proved pairs confirmed by the oracle", 300, klr},
      {9, "positivity and degree-zero bubble values, <i,lambda> in [-4,4]", 60, bubble_values},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Tally t;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(t);
    } catch (const std::exception& e) {
      t.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = t.failures.empty() && secs <= c.budget_s;
    failed += !ok;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " : " << t.checks << " checks, "
         << t.failures.size() << " failed, " << secs << "s of " << c.budget_s << "s";
    std::cout << line.str() << std::endl;
    for (std::size_t k = 0; k < t.failures.size() && k < 5; ++k) std::cout << "    " << t.failures[k] << "\n";
  }
  std::cout << (failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED") << " (" << criteria.size() - failed << "/"
            << criteria.size() << ")" << std::endl;
  return failed ? 1 : 0;
}
