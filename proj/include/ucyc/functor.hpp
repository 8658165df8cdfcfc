#pragma once

#include <string>
#include <vector>

#include "ucyc/diagram.hpp"
#include "ucyc/rules.hpp"

namespace ucyc {

/// Per-generator units of the rescaling isomorphism from the cyclic
/// 2-category to the non-cyclic one. Everything not listed maps to 1:
///   cap (E,F) at lambda   -> c_{i,lambda}
///   cup (F,E) at lambda   -> c_{i,lambda}^-1
///   down crossing (-i,-j) -> t_ji
///   sideways (+j,-i)      -> t_ij^-1
///   clockwise bubble      -> c_{i,lambda}, counterclockwise -> c_{i,lambda}^-1
class RescalingTable {
 public:
  explicit RescalingTable(Parameters params) : params_(std::move(params)) {}
  const Parameters& params() const { return params_; }

  /// Multiplier of generator k of d.
  Scalar multiplier(const Diagram& d, int k) const;
  /// Product over all generators.
  Scalar multiplier(const Diagram& d) const;

 private:
  Parameters params_;
};

Morphism apply_M(const RescalingTable& table, const Morphism& m);
Morphism apply_M_inverse(const RescalingTable& table, const Morphism& m);

/// Coefficient the target relation attaches to one side of a cyclic relation.
/// Sides not singled out by the proof carry 1.
Scalar target_side_scalar(const Parameters& params, const RelationInstance& r, bool lhs);

struct ResidualRow {
  std::string family;
  int instances = 0;
  int failures = 0;
  std::string first_failure;  // tag and residual of the first failing instance
};

struct ScalarIdentityRow {
  std::string name;
  std::string weight;
  Scalar residual;
};

struct PreservationReport {
  std::vector<ResidualRow> rows;
  std::vector<ScalarIdentityRow> identities;
  bool ok() const;
  std::string render() const;
  std::string to_json() const;  // carries "schema": 1
};

/// For every instance L = R with weights in [-range, range]: the image
/// M(L) - M(R) must be u (L' - R') for one unit u, where L' = R' is the
/// same relation with the target coefficients. Also evaluates the c-ratio
/// identities behind those coefficients.
PreservationReport verify_preservation(const RuleSet& rules, int range);

/// Named c-ratio identities at weight w; each residual must vanish.
std::vector<ScalarIdentityRow> c_ratio_identities(const Parameters& params, const Weight& w);

}  // namespace ucyc
