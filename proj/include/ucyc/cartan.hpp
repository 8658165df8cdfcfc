#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ucyc/scalar.hpp"

namespace ucyc {

class DatumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violations collected by the validators; empty means valid.
struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
  void add(std::string e) { errors.push_back(std::move(e)); }
  std::string render() const;
};

/// Symmetrizable generalized Cartan matrix over an ordered index set.
/// Colors are user labels; internally everything is indexed by position.
class CartanDatum {
 public:
  CartanDatum() = default;
  CartanDatum(std::vector<int> labels, std::vector<std::vector<int>> a, std::vector<int> d);

  static CartanDatum sl2();
  static CartanDatum a2();
  /// B2 with d = (2,1): a = [[2,-1],[-2,2]].
  static CartanDatum b2();
  /// Affine A1 (a = [[2,-2],[-2,2]]); the only built-in datum with s-terms.
  static CartanDatum affine_a1();

  int rank() const { return static_cast<int>(labels_.size()); }
  const std::vector<int>& labels() const { return labels_; }
  int label(int pos) const { return labels_.at(pos); }
  bool has_label(int label) const;
  int pos(int label) const;  // throws DatumError

  /// Entries by position.
  int a(int i, int j) const { return a_[i][j]; }
  int d(int i) const { return d_[i]; }
  /// d_ij = -a_ij for i != j (0 on the diagonal by convention).
  int dij(int i, int j) const { return i == j ? 0 : -a_[i][j]; }
  /// (alpha_i, alpha_j) = d_i a_ij.
  int form(int i, int j) const { return d_[i] * a_[i][j]; }
  const std::vector<std::vector<int>>& matrix() const { return a_; }
  const std::vector<int>& symmetrizers() const { return d_; }
  bool singular() const { return singular_; }

  /// Homogeneity-admissible s-index: 0 <= p < d_ij, 0 <= q < d_ji and
  /// d_i p + d_j q = d_i d_ij.
  bool s_admissible(int i, int j, int p, int q) const;

  /// Hermite data used for root-lattice coset bookkeeping.
  struct Reduction {
    std::vector<int> residual;  // canonical coset representative
    std::vector<int> n;         // lambda = residual + sum_j n_j alpha_j
    int coset = 0;
  };
  Reduction reduce(const std::vector<int>& coords) const;

  bool operator==(const CartanDatum& o) const {
    return labels_ == o.labels_ && a_ == o.a_ && d_ == o.d_;
  }

 private:
  void build_hermite();
  std::vector<int> labels_;
  std::vector<std::vector<int>> a_;
  std::vector<int> d_;
  // Column-style Hermite form H = a U (lower triangular), pivot column per row (-1 if none).
  std::vector<std::vector<long>> h_;
  std::vector<std::vector<long>> u_;
  std::vector<int> pivot_col_;
  bool singular_ = false;
};

ValidationReport validate_datum(const CartanDatum& datum);

/// A weight, stored as coroot pairings plus root-lattice bookkeeping
/// lambda = lambda_0 + sum_j n_j alpha_j. For a singular matrix the tag is
/// part of the identity of the weight (emulating an extended lattice).
struct Weight {
  std::vector<int> coords;
  int coset = 0;
  std::vector<int> n;

  static Weight from_coords(const CartanDatum& datum, std::vector<int> coords);
  /// lambda + sign * alpha_j (j by position).
  Weight shifted(const CartanDatum& datum, int j, int sign) const;
  int pairing(int i) const { return coords.at(i); }
  std::string render() const;  // "[c1,c2,...]"

  auto operator<=>(const Weight&) const = default;
  bool operator==(const Weight&) const = default;
};

/// <i,lambda> by color position; throws on an unknown index.
int pairing(const CartanDatum& datum, int i, const Weight& w);
/// (lambda, alpha_i) = d_i <i,lambda>.
int form_with_root(const CartanDatum& datum, const Weight& w, int i);

/// Choice of scalars Q and bubble parameters C, bundled since the latter is
/// constrained by the former.
class Parameters {
 public:
  Parameters() = default;
  /// Fully symbolic defaults: t(i,j) symbols (shared when d_ij = 0),
  /// s symbols on admissible indices, c(i,k) per coset.
  static Parameters symbolic(const CartanDatum& datum);
  /// All t = 1, s = 0, c = 1.
  static Parameters trivial(const CartanDatum& datum);

  const CartanDatum& datum() const { return datum_; }

  /// Positions i, j.
  Scalar t(int i, int j) const;
  Scalar s(int i, int j, int p, int q) const;
  /// Base value c_{i,lambda_0} for coset k.
  Scalar c_base(int i, int coset) const;
  /// c_{i,lambda} via the compatibility recursion.
  Scalar bubble_param(int i, const Weight& w) const;

  void set_t(int i, int j, Scalar v) { t_[{i, j}] = std::move(v); }
  void set_s(int i, int j, int p, int q, Scalar v) { s_[{i, j, p, q}] = std::move(v); }
  void set_c_base(int i, int coset, Scalar v) { c_[{i, coset}] = std::move(v); }
  /// Multiplies every c value of color i by f; used to build deliberately
  /// incompatible parameter sets in tests.
  void corrupt_c(int i, const Weight& w, Scalar replacement) { c_override_[{i, w}] = std::move(replacement); }

  const std::map<std::tuple<int, int, int, int>, Scalar>& s_entries() const { return s_; }
  const std::map<std::pair<int, int>, Scalar>& t_entries() const { return t_; }

 private:
  CartanDatum datum_;
  std::map<std::pair<int, int>, Scalar> t_;
  std::map<std::tuple<int, int, int, int>, Scalar> s_;
  std::map<std::pair<int, int>, Scalar> c_;
  std::map<std::pair<int, Weight>, Scalar> c_override_;
  bool symbolic_c_default_ = true;
  friend Parameters load_parameters_json(const std::string&);
};

ValidationReport validate_scalars(const Parameters& params);
/// Checks c_{i,lambda+alpha_j} c_{i,lambda}^{-1} = t_ij on the given weights.
ValidationReport validate_bubble_params(const Parameters& params, const std::vector<Weight>& sample);

/// Config ingestion: {"I":[...],"cartan":[[...]],"d":[...],"t":{},"s":{},"c_base":{}}.
/// Keys: t "i,j"; s "i,j,p,q"; c_base "i,k" (colors are labels). Values are
/// numbers, rational strings, the literal symbol names "t_ij", "s_ij_pq",
/// "c_i_k", or scalar expressions. Missing entries default to symbols.
Parameters load_parameters_json(const std::string& json_text);
Parameters load_parameters_file(const std::string& path);

}  // namespace ucyc
