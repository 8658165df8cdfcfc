#pragma once

#include <map>
#include <string>
#include <vector>

#include "ucyc/cartan.hpp"
#include "ucyc/scalar.hpp"

namespace ucyc {

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One strand of a 1-morphism: color position and sign (+1 = E, -1 = F).
struct Strand {
  int color = 0;
  int sign = 1;
  auto operator<=>(const Strand&) const = default;
  bool operator==(const Strand&) const = default;
};
using Seq = std::vector<Strand>;

std::string render_seq(const CartanDatum& datum, const Seq& s);

/// E_{i_1}...E_{i_m} 1_lambda <shift>; strands listed left to right,
/// lambda is the rightmost region.
struct OneMorphism {
  Seq seq;
  Weight weight;
  int shift = 0;
  /// Weight of the region with r strands to its left (r = size() is lambda).
  Weight region(const CartanDatum& datum, int r) const;
  Weight codomain(const CartanDatum& datum) const { return region(datum, 0); }
  auto operator<=>(const OneMorphism&) const = default;
  bool operator==(const OneMorphism&) const = default;
};

Weight region_weight(const CartanDatum& datum, const Seq& seq, const Weight& rightmost, int r);

enum class Gen : std::uint8_t {
  Dot,
  CrossUU,  // (+i,+j) -> (+j,+i)
  CrossDD,  // (-i,-j) -> (-j,-i)
  CrossFE,  // (-i,+j) -> (+j,-i)
  CrossEF,  // (+i,-j) -> (-j,+i)
  CupPEF,   // 0 -> (-i,+i)
  CupPFE,   // 0 -> (+i,-i)
  CapCEF,   // (-i,+i) -> 0
  CapCFE,   // (+i,-i) -> 0
  Bubble,   // closed dotted bubble, dots given in spade form
};

const char* gen_name(Gen g);

/// A generator placed in a slice. `pos` is the index of its leftmost input
/// strand (cups and bubbles: the region index where they sit).
struct Generator {
  Gen kind = Gen::Dot;
  int pos = 0;
  int i = 0;     // color position (first strand for crossings)
  int j = 0;     // second color for crossings
  int sign = 1;  // dots: strand sign
  bool cw = true;  // bubbles
  int m = 0;       // bubbles: spade offset

  int in_width() const;
  int out_width() const;
  Seq inputs() const;
  Seq outputs() const;

  static Generator dot(int pos, int i, int sign) { return {Gen::Dot, pos, i, 0, sign, true, 0}; }
  static Generator cross(Gen kind, int pos, int i, int j) { return {kind, pos, i, j, 1, true, 0}; }
  static Generator cupcap(Gen kind, int pos, int i) { return {kind, pos, i, 0, 1, true, 0}; }
  static Generator bubble(int pos, int i, bool cw, int m) { return {Gen::Bubble, pos, i, 0, 1, cw, m}; }

  auto operator<=>(const Generator&) const = default;
  bool operator==(const Generator&) const = default;
};

/// Crossing whose bottom boundary is (a, b); selects uu/dd/fe/ef by signs.
Generator crossing_for(int pos, Strand a, Strand b);

/// Slice word: generators listed bottom to top, one per slice.
class Diagram {
 public:
  Diagram() = default;
  Diagram(OneMorphism source, std::vector<Generator> gens);
  static Diagram identity(OneMorphism source);

  const OneMorphism& source() const { return source_; }
  const std::vector<Generator>& gens() const { return gens_; }
  const Weight& weight() const { return source_.weight; }
  /// Throws DiagramError on a boundary mismatch.
  Seq target_seq() const;
  OneMorphism target() const;
  /// Strand sequence below slice k (k = gens().size() gives the target).
  Seq seq_before(int k) const;

  /// Region weight on the outside of generator k (for cups/caps/bubbles the
  /// weight they are evaluated at; for other generators the region right of it).
  Weight outer_weight(const CartanDatum& datum, int k) const;

  int degree(const CartanDatum& datum) const;
  int generator_degree(const CartanDatum& datum, int k) const;

  /// Interchange-canonical form (idempotent).
  Diagram canonical() const;
  bool is_upward() const;  // only E strands, dots and uu crossings

  auto operator<=>(const Diagram&) const = default;
  bool operator==(const Diagram&) const = default;

 private:
  void check() const;
  OneMorphism source_;
  std::vector<Generator> gens_;
};

/// Formal Scalar-linear combination of parallel diagrams.
class Morphism {
 public:
  Morphism() = default;
  Morphism(OneMorphism source, OneMorphism target) : source_(std::move(source)), target_(std::move(target)) {}
  explicit Morphism(const Diagram& d, Scalar coeff = Scalar::one());
  static Morphism identity(const OneMorphism& s);

  const OneMorphism& source() const { return source_; }
  const OneMorphism& target() const { return target_; }
  const std::map<Diagram, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Diagram& d, const Scalar& c);
  Morphism& operator+=(const Morphism& o);
  Morphism& operator-=(const Morphism& o);
  Morphism operator+(const Morphism& o) const;
  Morphism operator-(const Morphism& o) const;
  Morphism operator*(const Scalar& c) const;
  Morphism operator-() const;
  bool operator==(const Morphism& o) const { return source_ == o.source_ && target_ == o.target_ && terms_ == o.terms_; }

  /// Common degree; throws if the morphism is inhomogeneous; nullopt when zero.
  std::optional<int> degree(const CartanDatum& datum) const;
  std::vector<int> term_degrees(const CartanDatum& datum) const;

 private:
  void check_parallel(const Morphism& o) const;
  OneMorphism source_;
  OneMorphism target_;
  std::map<Diagram, Scalar> terms_;
};

/// top after bottom.
Diagram compose_v(const Diagram& top, const Diagram& bottom);
Morphism compose_v(const Morphism& top, const Morphism& bottom);
/// left next to right (left's rightmost weight must be right's leftmost).
Diagram compose_h(const CartanDatum& datum, const Diagram& left, const Diagram& right);
Morphism compose_h(const CartanDatum& datum, const Morphism& left, const Morphism& right);

/// f* : caps on the left closing (t*, t), f, cups on the right creating (s, s*).
Diagram rotate_dual(const CartanDatum& datum, const Diagram& f);
Morphism rotate_dual(const CartanDatum& datum, const Morphism& f);
/// The other mate: cups on the left creating (s*, s), f, caps on the right
/// closing (t, t*). Undoes rotate_dual up to zigzags; agrees with the cube
/// of rotate_dual only up to cyclicity.
Diagram rotate_dual_inverse(const CartanDatum& datum, const Diagram& f);
Morphism rotate_dual_inverse(const CartanDatum& datum, const Morphism& f);
Seq dual_seq(const Seq& s);

}  // namespace ucyc
