#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ucyc/cartan.hpp"
#include "ucyc/diagram.hpp"

namespace ucyc {

class BubbleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True when clockwise is the canonical orientation for color i at w (<i,w> >= 1).
bool canonical_cw(const Weight& w, int i);

/// Literal dot count of the spade+m bubble.
int literal_dots(const Weight& w, int i, bool cw, int m);

/// Sorted product of canonical bubbles (color, m) with m >= 1.
using BubbleMonomial = std::vector<std::pair<int, int>>;

/// Element of End(1_w) written in canonical real bubbles.
class BubblePolynomial {
 public:
  BubblePolynomial() = default;
  explicit BubblePolynomial(Weight w) : weight_(std::move(w)) {}
  static BubblePolynomial constant(const Weight& w, const Scalar& c);
  /// The canonical bubble spade+m (m >= 1) as a single symbol.
  static BubblePolynomial symbol(const Weight& w, int i, int m);

  const Weight& weight() const { return weight_; }
  const std::map<BubbleMonomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  void add(const BubbleMonomial& mono, const Scalar& c);
  BubblePolynomial& operator+=(const BubblePolynomial& o);
  BubblePolynomial operator+(const BubblePolynomial& o) const;
  BubblePolynomial operator-(const BubblePolynomial& o) const;
  BubblePolynomial operator*(const BubblePolynomial& o) const;
  BubblePolynomial operator*(const Scalar& c) const;
  bool operator==(const BubblePolynomial& o) const { return weight_ == o.weight_ && terms_ == o.terms_; }

  /// Sum of 2 d_i m over a monomial.
  static int monomial_degree(const CartanDatum& datum, const BubbleMonomial& mono);
  std::string render(const CartanDatum& datum) const;
  /// As a morphism of End(1_w): each bubble stacked in one region.
  Morphism to_morphism(const CartanDatum& datum) const;

 private:
  Weight weight_;
  std::map<BubbleMonomial, Scalar> terms_;
};

BubbleMonomial multiply(const BubbleMonomial& a, const BubbleMonomial& b);

/// A polynomial in one dot variable with Scalar coefficients (exponent -> coefficient).
using DotPolynomial = std::map<int, Scalar>;

/// One term of a bubble slide: coeff * (bubble spade+m on the far side) * x^dots.
struct SlideTerm {
  Scalar coeff;
  int m = 0;
  int dots = 0;
};

class BubbleCalculus {
 public:
  explicit BubbleCalculus(Parameters params);
  const Parameters& params() const { return params_; }
  const CartanDatum& datum() const { return params_.datum(); }

  /// Normal form of the spade+m bubble of color i at w (negative m gives 0).
  BubblePolynomial bubble(int i, const Weight& w, bool cw, int m) const;
  /// Same as bubble() but rejects m < 0.
  BubblePolynomial fake_bubble(int i, const Weight& w, bool cw, int m) const;
  /// Fake bubbles unfolded literally by their inductive definition; real
  /// bubbles through bubble(). Kept separate so the Grassmannian check is
  /// not just the normal form agreeing with itself.
  BubblePolynomial fake_by_definition(int i, const Weight& w, bool cw, int m) const;
  Scalar degree_zero(int i, const Weight& w, bool cw) const;

  /// Coefficients of t^k, k <= N, of the product of the two generating series.
  bool grassmannian_check(int i, const Weight& w, int N) const;
  /// Replace a degree-zero value (sanity testing of the checker only).
  void override_degree_zero(int i, const Weight& w, bool cw, Scalar v);

  /// Power series G(u, x) (truncated at u^order) with B_from(u) = B_to(u) G(u, x)
  /// when a bubble of color i crosses a strand of color j. `expanded`
  /// selects the polynomial form; otherwise its series inverse.
  std::vector<DotPolynomial> slide_series(int i, int j, bool expanded, int order) const;
  /// Terms of moving the spade+m bubble across a strand of color j. The
  /// bubble sits on the right of the strand's direction iff `on_right`.
  std::vector<SlideTerm> slide_terms(int i, int j, bool cw, int m, bool on_right) const;
  /// Whether the displayed (finite) form applies for this orientation/side.
  static bool slide_is_expanded(bool cw, bool on_right) { return cw != on_right; }

  /// Literal binomial form of the inverted slide (a_ij < 0), for cross-checking
  /// the series inverse; entries are (coeff, bubble shift, dots).
  std::vector<SlideTerm> inverted_slide_displayed(int i, int j, bool cw, int m) const;

 private:
  Parameters params_;
  std::map<std::tuple<int, Weight, bool>, Scalar> deg0_override_;
  mutable std::map<std::tuple<int, Weight, bool, int>, BubblePolynomial> memo_;
};

/// Curl on E_i with m dots on the loop. side "left" is the loop on the
/// right of the strand with lambda the rightmost region; side "right" is the
/// loop on the left with lambda the leftmost region.
enum class CurlSide { Left, Right };
/// The curl diagram itself (a single slice diagram).
Diagram curl_diagram(const CartanDatum& datum, CurlSide side, int i, const Weight& lambda, int m);
/// Its value in dots and bubbles.
Morphism curl_reduce(const CartanDatum& datum, CurlSide side, int i, const Weight& lambda, int m);

enum class SlideForm { Expanded, Inverted };
/// Left-hand side: the spade+m bubble on side `from_right ? right : left` of an
/// upward j strand, lambda the rightmost region. Returns the right-hand side.
Morphism bubble_slide(const BubbleCalculus& calc, int i, int j, const Weight& lambda, bool cw, int m, bool from_right,
                      SlideForm form);
Diagram bubble_beside_strand(const CartanDatum& datum, int i, int j, const Weight& lambda, bool cw, int m,
                             bool bubble_right, int dots);

}  // namespace ucyc
