#pragma once

#include <map>
#include <string>
#include <vector>

#include "ucyc/cartan.hpp"
#include "ucyc/diagram.hpp"

namespace ucyc {

class KlrError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial in x_1..x_n (exponent vector -> coefficient).
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : n_(nvars) {}
  static Poly monomial(std::vector<int> exps, const Scalar& c = Scalar::one());

  int nvars() const { return n_; }
  const std::map<std::vector<int>, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add(const std::vector<int>& exps, const Scalar& c);
  Poly& operator+=(const Poly& o);
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Scalar& c) const;
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Poly times_var(int k, int power = 1) const;
  Poly swapped(int k) const;  // exchange x_k and x_{k+1}
  /// (f - s_k f) / (x_k - x_{k+1}); exact.
  Poly divided_difference(int k) const;
  std::string render() const;

 private:
  int n_ = 0;
  std::map<std::vector<int>, Scalar> terms_;
};

/// Color sequence -> polynomial.
using PolyState = std::map<std::vector<int>, Poly>;

/// The polynomial representation of the KLR algebra. Equal colors cross by
/// divided differences; unequal colors (a, b) swap variables, multiplied by
/// Q_ba(x_k, x_{k+1}) when a comes after b in the color order.
class KlrRep {
 public:
  explicit KlrRep(Parameters params) : params_(std::move(params)) {}
  const Parameters& params() const { return params_; }

  /// Q_ij(u, v) with u = x_k, v = x_{k+1}, as a polynomial in n variables.
  Poly q_poly(int i, int j, int k, int n) const;
  /// Diagram acting on a polynomial attached to its bottom colors.
  Poly act(const Diagram& d, const Poly& f) const;
  PolyState act(const Diagram& d, const PolyState& s) const;
  /// act(a) and act(b) agree on every monomial of degree <= bound.
  bool equal(const Morphism& a, const Morphism& b, int degree_bound) const;
  /// Default bound: enough room for every dot and crossing of either side.
  static int default_bound(const CartanDatum& datum, const Morphism& a, const Morphism& b);

 private:
  Parameters params_;
};

/// True when the morphism has only upward strands, dots and upward crossings.
bool is_upward_morphism(const Morphism& m);

bool oracle_equal(const Parameters& params, const Morphism& a, const Morphism& b, int degree_bound = -1);

}  // namespace ucyc
