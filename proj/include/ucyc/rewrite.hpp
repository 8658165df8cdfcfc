#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ucyc/bubbles.hpp"
#include "ucyc/planar.hpp"

namespace ucyc {

class RewriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear combination of canonical planar graphs, keyed by canonical key.
class GraphSum {
 public:
  using Terms = std::map<std::string, std::pair<PlanarGraph, Scalar>>;
  void add(const PlanarGraph& g, const Scalar& c);
  void add(const GraphSum& o, const Scalar& c);
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool operator==(const GraphSum& o) const;

 private:
  Terms terms_;
};

GraphSum to_graphs(const CartanDatum& datum, const Morphism& m);
Morphism to_morphism(const GraphSum& s, const OneMorphism& source, const OneMorphism& target);

enum class Tier { T1, T2, T3 };

/// One rule application: `rule` at `site` of term number `term` (terms in key
/// order). Sites are crossing numbers of the canonical graph; dot moves use
/// (crossing, slot).
struct TraceStep {
  std::string rule;
  int term = 0;
  std::vector<int> site;
  std::string bindings;
  std::string render() const;
  /// Parses "RULE name @ term:site {bindings}"; throws RewriteError.
  static TraceStep parse(const std::string& line);
};

struct RewriteTrace {
  std::vector<TraceStep> steps;
  std::string render() const;
  static RewriteTrace parse(const std::string& text);
};

struct NormalForm {
  Morphism value;
  bool normal = true;
  RewriteTrace trace;
};

enum class ProofStatus { Proved, Unknown };
struct ProofResult {
  ProofStatus status = ProofStatus::Unknown;
  RewriteTrace trace;
  /// The difference after the last step (zero when proved).
  Morphism residue;
};

/// The relation engine on planar graphs. Every step is followed by settling:
/// loose bubbles slide into the designated face and closed components are
/// evaluated, so only crossings, dots and designated-face bubbles remain.
class Rewriter {
 public:
  explicit Rewriter(Parameters params, int step_budget = 4000);
  const BubbleCalculus& calculus() const { return calc_; }
  const CartanDatum& datum() const { return calc_.datum(); }

  GraphSum settle(const PlanarGraph& g) const;
  GraphSum settle(const GraphSum& s) const;
  /// Value of a closed graph as a bubble polynomial at its outer weight;
  /// nullopt when the reducing rules get stuck.
  std::optional<BubblePolynomial> evaluate_closed(const PlanarGraph& g) const;

  /// First reducing site of a settled graph, in rule priority order.
  std::optional<TraceStep> reducing_site(const PlanarGraph& g) const;
  /// Bidirectional moves for the equality search: braid moves on triangle
  /// faces and bigon insertions beside cyclic triangles, in catalogue order.
  std::vector<TraceStep> search_moves(const PlanarGraph& g) const;
  /// Next step towards the KLR normal form: dots move against the strand
  /// orientation through crossings, then upward crossings are braided into
  /// the lexicographically least reduced word. With `rng` the choices among
  /// equivalent steps are randomized.
  std::optional<TraceStep> klr_site(const PlanarGraph& g, std::mt19937_64* rng = nullptr) const;
  /// Applies a named rule at a site of a settled graph; throws RewriteError
  /// when the pattern does not match. The result is settled.
  GraphSum apply_at(const PlanarGraph& g, const TraceStep& step) const;
  /// Replaces one term of a sum by the result of the step.
  GraphSum apply_step(const GraphSum& s, const TraceStep& step) const;

  /// Reducing rules to a fixpoint; `normal` is cleared when the budget runs
  /// out or a closed component is stuck.
  GraphSum reduce(GraphSum s, std::vector<TraceStep>* trace, bool* normal) const;
  /// reduce interleaved with KLR steps until neither applies.
  GraphSum sector_reduce(GraphSum s, std::vector<TraceStep>* trace, bool* normal, std::mt19937_64* rng = nullptr) const;

  /// A nonzero seed randomizes the order of T2 steps (the result must not change).
  NormalForm normalize(const Morphism& m, Tier tier, std::uint64_t seed = 0) const;
  /// depth 0 compares canonical graphs only; depth 1 adds normalization;
  /// every further level allows one more search move.
  ProofResult prove_equal(const Morphism& a, const Morphism& b, int depth) const;
  /// Runs the steps from m; the result is settled and in graph form.
  GraphSum replay(const Morphism& m, const RewriteTrace& trace) const;

 private:
  BubbleCalculus calc_;
  int budget_;
  mutable std::map<std::string, std::optional<BubblePolynomial>> closed_memo_;
  mutable int closed_depth_ = 0;
};

}  // namespace ucyc
