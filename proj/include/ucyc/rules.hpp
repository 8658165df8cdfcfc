#pragma once

#include <string>
#include <vector>

#include "ucyc/cartan.hpp"
#include "ucyc/diagram.hpp"

namespace ucyc {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reducing rules shrink diagrams and run inside normalization; the others
/// are only used as search moves.
enum class Orientation { Reducing, Bidirectional };

struct RuleFamily {
  std::string name;
  Orientation orientation = Orientation::Reducing;
  std::string summary;
};

/// One instantiated relation lhs = rhs.
struct RelationInstance {
  std::string family;
  std::string tag;  // colors and weight of the instance
  Morphism lhs, rhs;
  std::vector<int> colors;  // positions of i, j, k
  std::string variant;      // which member of the family, e.g. "left"
};

/// The defining relations of the cyclic 2-category as families of instances.
class RuleSet {
 public:
  /// Installs the full catalogue and checks every instance with weights in
  /// [-range, range]^rank for homogeneity; throws RuleError naming the family.
  static RuleSet install(const Parameters& params, int range = 4);

  const Parameters& params() const { return params_; }
  const std::vector<RuleFamily>& families() const { return families_; }
  const RuleFamily& family(const std::string& name) const;
  /// Instances over all color choices and weights with coordinates in [-range, range].
  std::vector<RelationInstance> instances(const std::string& family, int range) const;
  /// Instances at one rightmost weight.
  std::vector<RelationInstance> instances_at(const std::string& family, const Weight& w) const;

 private:
  Parameters params_;
  std::vector<RuleFamily> families_;
};

/// Degree of every term on both sides agrees; `why` receives the offending degrees.
bool is_homogeneous(const CartanDatum& datum, const RelationInstance& r, std::string* why = nullptr);

/// All weights with coordinates in [-range, range].
std::vector<Weight> weight_box(const CartanDatum& datum, int range);

}  // namespace ucyc
