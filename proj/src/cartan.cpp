#include "ucyc/cartan.hpp"

#include "json.hpp"

#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

namespace ucyc {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long zigzag(long v) { return v >= 0 ? 2 * v : -2 * v - 1; }
long cantor(long a, long b) { return (a + b) * (a + b + 1) / 2 + b; }

}  // namespace

std::string ValidationReport::render() const {
  if (errors.empty()) return "valid";
  std::string out;
  for (const auto& e : errors) out += "invalid: " + e + "\n";
  return out;
}

CartanDatum::CartanDatum(std::vector<int> labels, std::vector<std::vector<int>> a, std::vector<int> d)
    : labels_(std::move(labels)), a_(std::move(a)), d_(std::move(d)) {
  std::size_t n = labels_.size();
  if (a_.size() != n || d_.size() != n) throw DatumError("cartan matrix / symmetrizer size mismatch");
  for (const auto& row : a_)
    if (row.size() != n) throw DatumError("cartan matrix is not square");
  build_hermite();
}

CartanDatum CartanDatum::sl2() { return CartanDatum({1}, {{2}}, {1}); }
CartanDatum CartanDatum::a2() { return CartanDatum({1, 2}, {{2, -1}, {-1, 2}}, {1, 1}); }
CartanDatum CartanDatum::b2() { return CartanDatum({1, 2}, {{2, -1}, {-2, 2}}, {2, 1}); }
CartanDatum CartanDatum::affine_a1() { return CartanDatum({1, 2}, {{2, -2}, {-2, 2}}, {1, 1}); }

bool CartanDatum::has_label(int label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int CartanDatum::pos(int label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw DatumError("unknown index " + std::to_string(label));
  return static_cast<int>(it - labels_.begin());
}

bool CartanDatum::s_admissible(int i, int j, int p, int q) const {
  if (i == j) return false;
  int dij_ = dij(i, j), dji_ = dij(j, i);
  if (p < 0 || q < 0 || p >= dij_ || q >= dji_) return false;
  return d_[i] * p + d_[j] * q == d_[i] * dij_;
}

void CartanDatum::build_hermite() {
  int n = rank();
  h_.assign(n, std::vector<long>(n, 0));
  u_.assign(n, std::vector<long>(n, 0));
  for (int r = 0; r < n; ++r) {
    u_[r][r] = 1;
    for (int c = 0; c < n; ++c) h_[r][c] = a_[r][c];
  }
  auto col_op = [&](int dst, int src, long f) {  // col dst -= f * col src
    for (int r = 0; r < n; ++r) {
      h_[r][dst] -= f * h_[r][src];
      u_[r][dst] -= f * u_[r][src];
    }
  };
  auto col_swap = [&](int x, int y) {
    for (int r = 0; r < n; ++r) {
      std::swap(h_[r][x], h_[r][y]);
      std::swap(u_[r][x], u_[r][y]);
    }
  };
  auto col_neg = [&](int x) {
    for (int r = 0; r < n; ++r) {
      h_[r][x] = -h_[r][x];
      u_[r][x] = -u_[r][x];
    }
  };
  pivot_col_.assign(n, -1);
  int p = 0;
  for (int k = 0; k < n && p < n; ++k) {
    // Euclid across columns p..n-1 on row k.
    for (;;) {
      int best = -1;
      for (int c = p; c < n; ++c)
        if (h_[k][c] != 0 && (best < 0 || std::abs(h_[k][c]) < std::abs(h_[k][best]))) best = c;
      if (best < 0) break;
      if (best != p) col_swap(best, p);
      bool done = true;
      for (int c = p + 1; c < n; ++c) {
        if (h_[k][c] != 0) {
          col_op(c, p, h_[k][c] / h_[k][p]);
          if (h_[k][c] != 0) done = false;
        }
      }
      if (done) break;
    }
    if (h_[k][p] == 0) continue;
    if (h_[k][p] < 0) col_neg(p);
    for (int c = 0; c < p; ++c) col_op(c, p, floor_div(h_[k][c], h_[k][p]));
    pivot_col_[k] = p;
    ++p;
  }
  singular_ = p < n;
}

CartanDatum::Reduction CartanDatum::reduce(const std::vector<int>& coords) const {
  int n = rank();
  if (static_cast<int>(coords.size()) != n) throw DatumError("weight has wrong dimension");
  std::vector<long> r(coords.begin(), coords.end());
  std::vector<long> q(n, 0);
  for (int k = 0; k < n; ++k) {
    int c = pivot_col_[k];
    if (c < 0) continue;
    long f = floor_div(r[k], h_[k][c]);
    for (int row = 0; row < n; ++row) r[row] -= f * h_[row][c];
    q[c] += f;
  }
  Reduction out;
  out.residual.assign(r.begin(), r.end());
  out.n.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    long s = 0;
    for (int c = 0; c < n; ++c) s += u_[j][c] * q[c];
    out.n[j] = static_cast<int>(s);
  }
  long id = 0;
  for (int k = 0; k < n; ++k) {
    int c = pivot_col_[k];
    if (c >= 0) id = id * h_[k][c] + r[k];
  }
  for (int k = 0; k < n; ++k)
    if (pivot_col_[k] < 0) id = cantor(id, zigzag(r[k]));
  out.coset = static_cast<int>(id);
  return out;
}

ValidationReport validate_datum(const CartanDatum& datum) {
  ValidationReport rep;
  int n = datum.rank();
  if (n == 0) rep.add("index set is empty");
  for (int i = 0; i < n; ++i) {
    if (datum.a(i, i) != 2)
      rep.add("diagonal entry a[" + std::to_string(datum.label(i)) + "][" + std::to_string(datum.label(i)) +
              "] must be 2");
    if (datum.d(i) < 1) rep.add("symmetrizer d_" + std::to_string(datum.label(i)) + " must be >= 1");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (datum.a(i, j) > 0) rep.add("off-diagonal must be <= 0 (a[" + std::to_string(datum.label(i)) + "][" +
                                     std::to_string(datum.label(j)) + "])");
      if (datum.d(i) * datum.a(i, j) != datum.d(j) * datum.a(j, i))
        rep.add("not symmetrizable at (" + std::to_string(datum.label(i)) + "," + std::to_string(datum.label(j)) +
                ")");
    }
  }
  std::vector<int> labels = datum.labels();
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) rep.add("duplicate index labels");
  return rep;
}

Weight Weight::from_coords(const CartanDatum& datum, std::vector<int> coords) {
  auto red = datum.reduce(coords);
  return Weight{std::move(coords), red.coset, std::move(red.n)};
}

Weight Weight::shifted(const CartanDatum& datum, int j, int sign) const {
  Weight w = *this;
  for (int i = 0; i < datum.rank(); ++i) w.coords[i] += sign * datum.a(i, j);
  w.n[j] += sign;
  return w;
}

std::string Weight::render() const {
  std::string out = "[";
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(coords[k]);
  }
  return out + "]";
}

int pairing(const CartanDatum& datum, int i, const Weight& w) {
  if (i < 0 || i >= datum.rank()) throw DatumError("unknown index position " + std::to_string(i));
  return w.pairing(i);
}

int form_with_root(const CartanDatum& datum, const Weight& w, int i) { return datum.d(i) * pairing(datum, i, w); }

Parameters Parameters::symbolic(const CartanDatum& datum) {
  Parameters p;
  p.datum_ = datum;
  int n = datum.rank();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int li = datum.label(i), lj = datum.label(j);
      if (datum.dij(i, j) == 0)
        p.t_[{i, j}] = Scalar(Symbol::t(std::min(li, lj), std::max(li, lj)));
      else
        p.t_[{i, j}] = Scalar(Symbol::t(li, lj));
      for (int a = 0; a < datum.dij(i, j); ++a)
        for (int b = 0; b < datum.dij(j, i); ++b)
          if (datum.s_admissible(i, j, a, b)) p.s_[{i, j, a, b}] = Scalar(Symbol::s(li, lj, a, b));
    }
  }
  return p;
}

Parameters Parameters::trivial(const CartanDatum& datum) {
  Parameters p;
  p.datum_ = datum;
  p.symbolic_c_default_ = false;
  for (int i = 0; i < datum.rank(); ++i)
    for (int j = 0; j < datum.rank(); ++j)
      if (i != j) p.t_[{i, j}] = Scalar(1L);
  return p;
}

Scalar Parameters::t(int i, int j) const {
  if (i == j) return Scalar::one();
  auto it = t_.find({i, j});
  if (it == t_.end()) throw DatumError("missing t value");
  return it->second;
}

Scalar Parameters::s(int i, int j, int p, int q) const {
  if (!datum_.s_admissible(i, j, p, q)) return Scalar::zero();
  auto it = s_.find({i, j, p, q});
  if (it != s_.end()) return it->second;
  return Scalar::zero();
}

Scalar Parameters::c_base(int i, int coset) const {
  auto it = c_.find({i, coset});
  if (it != c_.end()) return it->second;
  if (symbolic_c_default_) return Scalar(Symbol::c(datum_.label(i), coset));
  return Scalar::one();
}

Scalar Parameters::bubble_param(int i, const Weight& w) const {
  if (auto it = c_override_.find({i, w}); it != c_override_.end()) return it->second;
  Scalar out = c_base(i, w.coset);
  for (int j = 0; j < datum_.rank(); ++j)
    if (w.n[j] != 0 && j != i) out *= t(i, j).pow(w.n[j]);
  return out;
}

ValidationReport validate_scalars(const Parameters& params) {
  ValidationReport rep;
  const auto& datum = params.datum();
  int n = datum.rank();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      std::string tag = std::to_string(datum.label(i)) + std::to_string(datum.label(j));
      Scalar tij = params.t(i, j);
      if (tij.is_zero() || !tij.is_unit()) rep.add("t_ij must be invertible (t_" + tag + ")");
      if (datum.dij(i, j) == 0 && !(tij == params.t(j, i))) rep.add("t_ij = t_ji required when d_ij = 0 (t_" + tag + ")");
    }
  }
  for (const auto& [key, v] : params.s_entries()) {
    auto [i, j, p, q] = key;
    if (v.is_zero()) continue;
    std::string name = "s_" + std::to_string(datum.label(i)) + std::to_string(datum.label(j)) + "^{" +
                       std::to_string(p) + "," + std::to_string(q) + "}";
    if (i == j || p < 0 || q < 0 || p >= datum.dij(i, j) || q >= datum.dij(j, i)) {
      rep.add(name + " outside 0 <= p < d_ij, 0 <= q < d_ji must vanish");
      continue;
    }
    if (!datum.s_admissible(i, j, p, q)) {
      rep.add(name + " violates degree homogeneity (d_i p + d_j q = d_i d_ij) and must vanish");
      continue;
    }
  }
  for (const auto& [key, v] : params.s_entries()) {
    auto [i, j, p, q] = key;
    auto it = params.s_entries().find({j, i, q, p});
    Scalar other = it == params.s_entries().end() ? Scalar::zero() : it->second;
    if (!(v == other) && (i < j || it == params.s_entries().end()))
      rep.add("s_ij^{pq} = s_ji^{qp} violated at (" + std::to_string(datum.label(i)) + "," +
              std::to_string(datum.label(j)) + ";" + std::to_string(p) + "," + std::to_string(q) + ")");
  }
  return rep;
}

ValidationReport validate_bubble_params(const Parameters& params, const std::vector<Weight>& sample) {
  ValidationReport rep;
  const auto& datum = params.datum();
  for (const auto& w : sample) {
    for (int i = 0; i < datum.rank(); ++i) {
      Scalar ci = params.bubble_param(i, w);
      if (!ci.is_unit() || ci.is_zero()) {
        rep.add("c_{" + std::to_string(datum.label(i)) + "," + w.render() + "} is not a unit");
        continue;
      }
      for (int j = 0; j < datum.rank(); ++j) {
        Scalar ratio = params.bubble_param(i, w.shifted(datum, j, 1)) * ci.inverse();
        if (!(ratio == params.t(i, j)))
          rep.add("c_{i,lambda+alpha_j}/c_{i,lambda} != t_ij at i=" + std::to_string(datum.label(i)) +
                  " j=" + std::to_string(datum.label(j)) + " lambda=" + w.render());
      }
    }
  }
  return rep;
}

namespace {

Scalar parse_value(const nlohmann::json& v, const CartanDatum& datum) {
  if (v.is_number_integer()) return Scalar(Rational(v.get<long>()));
  if (v.is_number()) throw DatumError("non-integer numeric parameter; use a rational string like \"3/2\"");
  if (!v.is_string()) throw DatumError("parameter values must be numbers or strings");
  std::string s = v.get<std::string>();
  std::smatch m;
  auto split_labels = [&](const std::string& body, std::size_t count) {
    std::vector<int> out;
    if (body.find('_') != std::string::npos) {
      std::stringstream ss(body);
      std::string part;
      while (std::getline(ss, part, '_')) out.push_back(std::stoi(part));
    } else {
      for (char ch : body) out.push_back(ch - '0');
    }
    if (out.size() != count) throw DatumError("cannot read symbol name " + s);
    return out;
  };
  if (std::regex_match(s, m, std::regex("t_([0-9_]+)"))) {
    auto ix = split_labels(m[1], 2);
    return Scalar(Symbol::t(ix[0], ix[1]));
  }
  if (std::regex_match(s, m, std::regex("c_([0-9]+)_(-?[0-9]+)"))) {
    return Scalar(Symbol::c(std::stoi(m[1]), std::stoi(m[2])));
  }
  if (std::regex_match(s, m, std::regex("s_([0-9]+)_([0-9]+)"))) {
    auto ij = split_labels(m[1], 2);
    auto pq = split_labels(m[2], 2);
    return Scalar(Symbol::s(ij[0], ij[1], pq[0], pq[1]));
  }
  (void)datum;
  return Scalar::parse(s);
}

std::vector<int> parse_key(const std::string& key, std::size_t count) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  if (out.size() != count) throw DatumError("malformed key \"" + key + "\"");
  return out;
}

}  // namespace

Parameters load_parameters_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DatumError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    auto labels = j.at("I").get<std::vector<int>>();
    auto a = j.at("cartan").get<std::vector<std::vector<int>>>();
    std::vector<int> d = j.contains("d") ? j.at("d").get<std::vector<int>>() : std::vector<int>(labels.size(), 1);
    CartanDatum datum(labels, a, d);
    auto rep = validate_datum(datum);
    if (!rep.ok()) throw DatumError("invalid Cartan datum: " + rep.errors.front());
    Parameters p = Parameters::symbolic(datum);
    if (j.contains("t")) {
      for (auto& [key, v] : j.at("t").items()) {
        auto ix = parse_key(key, 2);
        p.t_[{datum.pos(ix[0]), datum.pos(ix[1])}] = parse_value(v, datum);
      }
    }
    if (j.contains("s")) {
      for (auto& [key, v] : j.at("s").items()) {
        auto ix = parse_key(key, 4);
        p.s_[{datum.pos(ix[0]), datum.pos(ix[1]), ix[2], ix[3]}] = parse_value(v, datum);
      }
    }
    if (j.contains("c_base")) {
      for (auto& [key, v] : j.at("c_base").items()) {
        auto ix = parse_key(key, 2);
        p.c_[{datum.pos(ix[0]), ix[1]}] = parse_value(v, datum);
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DatumError(std::string("config field error: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw DatumError("config contains a malformed integer");
  }
}

Parameters load_parameters_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatumError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_parameters_json(ss.str());
}

}  // namespace ucyc
