#include "ucyc/functor.hpp"

#include <sstream>

#include "json.hpp"
#include "ucyc/text.hpp"

namespace ucyc {

Scalar RescalingTable::multiplier(const Diagram& d, int k) const {
  const Generator& g = d.gens()[k];
  const CartanDatum& D = params_.datum();
  switch (g.kind) {
    case Gen::CapCFE: return params_.bubble_param(g.i, d.outer_weight(D, k));
    case Gen::CupPEF: return params_.bubble_param(g.i, d.outer_weight(D, k)).inverse();
    case Gen::CrossDD: return params_.t(g.j, g.i);
    case Gen::CrossEF: return params_.t(g.j, g.i).inverse();
    case Gen::Bubble: {
      Scalar c = params_.bubble_param(g.i, d.outer_weight(D, k));
      return g.cw ? c : c.inverse();
    }
    default: return Scalar::one();
  }
}

Scalar RescalingTable::multiplier(const Diagram& d) const {
  Scalar out = Scalar::one();
  for (int k = 0; k < static_cast<int>(d.gens().size()); ++k) out *= multiplier(d, k);
  return out;
}

namespace {

Morphism rescale(const RescalingTable& table, const Morphism& m, bool inverse) {
  Morphism out(m.source(), m.target());
  for (const auto& [d, c] : m.terms()) {
    Scalar u = table.multiplier(d);
    out.add(d, c * (inverse ? u.inverse() : u));
  }
  return out;
}

}  // namespace

Morphism apply_M(const RescalingTable& table, const Morphism& m) { return rescale(table, m, false); }
Morphism apply_M_inverse(const RescalingTable& table, const Morphism& m) { return rescale(table, m, true); }

Scalar target_side_scalar(const Parameters& params, const RelationInstance& r, bool lhs) {
  // Degree zero bubbles are 1 in the target.
  if ((r.family == "degree_zero" || r.family == "fake") && !lhs && !r.colors.empty()) {
    Scalar c = params.bubble_param(r.colors[0], r.rhs.source().weight);
    if (r.variant == "cw" || r.variant == "cw0") return c.inverse();
    if (r.variant == "ccw" || r.variant == "ccw0") return c;
  }
  if (r.colors.size() < 2) return Scalar::one();
  const int i = r.colors[0], j = r.colors[1];
  const std::string& f = r.family;
  if (f == "cyclic") {
    if (!lhs) return params.t(j, i);
    return r.variant == "left" ? params.t(i, j).inverse() * params.t(j, i) : Scalar::one();
  }
  if (f == "crossl") {
    if (lhs || r.variant == "a") return params.t(i, j).inverse();
    return Scalar::one();
  }
  if (f == "crossr") return !lhs && r.variant == "b" ? params.t(j, i) : Scalar::one();
  if (f == "mixed_rel" && lhs) return r.variant == "EF" ? params.t(j, i).inverse() : params.t(i, j).inverse();
  return Scalar::one();
}

std::vector<ScalarIdentityRow> c_ratio_identities(const Parameters& params, const Weight& w) {
  const CartanDatum& D = params.datum();
  std::vector<ScalarIdentityRow> out;
  auto c = [&](int i, const Weight& x) { return params.bubble_param(i, x); };
  auto lab = [&](int i) { return std::to_string(D.label(i)); };
  for (int i = 0; i < D.rank(); ++i)
    for (int j = 0; j < D.rank(); ++j) {
      if (i == j) continue;
      const std::string ij = lab(i) + "," + lab(j);
      Weight wi = w.shifted(D, i, -1), wj = w.shifted(D, j, -1);
      Scalar lhs = c(j, wi.shifted(D, j, -1)).inverse() * c(i, wi).inverse() * c(i, wj) * c(j, w);
      out.push_back({"dd cyclicity ratio (" + ij + ")", w.render(),
                     lhs - params.t(i, j).inverse() * params.t(j, i)});
      out.push_back({"left sideways ratio (" + ij + ")", w.render(),
                     c(i, w) * c(i, wi.shifted(D, j, 1)).inverse() - params.t(i, j).inverse()});
      out.push_back({"weight shift ratio (" + ij + ")", w.render(),
                     c(i, w) * c(i, w.shifted(D, j, 1)).inverse() - params.t(i, j).inverse()});
      out.push_back({"right sideways ratio (" + ij + ")", w.render(),
                     c(j, w).inverse() * c(j, w.shifted(D, j, 1).shifted(D, i, -1)) - params.t(j, i).inverse()});
    }
  return out;
}

PreservationReport verify_preservation(const RuleSet& rules, int range) {
  const Parameters& P = rules.params();
  const CartanDatum& D = P.datum();
  RescalingTable table(P);
  PreservationReport rep;
  for (const RuleFamily& f : rules.families()) {
    ResidualRow row{f.name, 0, 0, ""};
    for (const RelationInstance& r : rules.instances(f.name, range)) {
      ++row.instances;
      Morphism image = apply_M(table, r.lhs) - apply_M(table, r.rhs);
      Scalar sl = target_side_scalar(P, r, true), sr = target_side_scalar(P, r, false);
      Morphism target = r.lhs * sl - r.rhs * sr;
      // u is read off one term; every other term has to agree with it.
      const bool from_lhs = !r.lhs.is_zero();
      const Morphism& side = from_lhs ? r.lhs : r.rhs;
      Scalar u = Scalar::one();
      if (!side.is_zero()) u = table.multiplier(side.terms().begin()->first) * (from_lhs ? sl : sr).inverse();
      Morphism residual = image - target * u;
      if (!residual.is_zero()) {
        if (row.failures == 0) row.first_failure = r.tag + ": " + render_morphism(D, residual);
        ++row.failures;
      }
    }
    rep.rows.push_back(row);
  }
  for (const Weight& w : weight_box(D, range))
    for (auto& id : c_ratio_identities(P, w)) rep.identities.push_back(std::move(id));
  return rep;
}

bool PreservationReport::ok() const {
  for (const auto& r : rows)
    if (r.failures) return false;
  for (const auto& i : identities)
    if (!i.residual.is_zero()) return false;
  return true;
}

std::string PreservationReport::render() const {
  std::ostringstream o;
  for (const auto& r : rows) {
    o << r.family << ": " << r.instances << " instances, residual " << (r.failures ? "NONZERO" : "0");
    if (r.failures) o << " (" << r.failures << " failing; first " << r.first_failure << ")";
    o << "\n";
  }
  int bad = 0;
  for (const auto& i : identities)
    if (!i.residual.is_zero()) {
      if (!bad) o << "identity " << i.name << " at " << i.weight << " residual " << i.residual.render() << "\n";
      ++bad;
    }
  o << "c-ratio identities: " << identities.size() << " checked, " << bad << " nonzero\n";
  return o.str();
}

std::string PreservationReport::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["ok"] = ok();
  j["families"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["families"].push_back({{"family", r.family},
                             {"instances", r.instances},
                             {"failures", r.failures},
                             {"residual", r.failures ? r.first_failure : "0"}});
  j["identities"] = nlohmann::json::array();
  for (const auto& i : identities)
    j["identities"].push_back({{"name", i.name}, {"weight", i.weight}, {"residual", i.residual.render()}});
  return j.dump(2);
}

}  // namespace ucyc
