#pragma once

// Test-side builders for displayed identities and random diagrams. They are
// written from the relations directly, without the engine's rule code.

#include <random>
#include <string>
#include <vector>

#include "ucyc/cartan.hpp"
#include "ucyc/diagram.hpp"
#include "ucyc/text.hpp"

namespace ucyc::testing {

inline std::string lab(const CartanDatum& D, int i) { return std::to_string(D.label(i)); }

inline std::string join_slices(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += " ; ";
    out += p;
  }
  return out;
}

inline std::vector<std::string> times(const std::string& slice, int n) { return std::vector<std::string>(n, slice); }

inline void append(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

struct Identity {
  Morphism lhs, rhs;
};

// A braid with the middle strand pointing down, moved across: holds unless
// all three colors agree.
inline Identity triple_oriented(const CartanDatum& D, int i, int j, int k, const Weight& w) {
  std::string I = lab(D, i), J = lab(D, j), K = lab(D, k), at = " @ " + w.render();
  return {parse_morphism(D, "x(+" + I + ",-" + J + ")|id(+" + K + ") ; id(-" + J + ")|x(+" + I + ",+" + K + ") ; x(-" + J + ",+" + K +
                                ")|id(+" + I + ")" + at),
          parse_morphism(D, "id(+" + I + ")|x(-" + J + ",+" + K + ") ; x(+" + I + ",+" + K + ")|id(-" + J + ") ; id(+" + K + ")|x(+" + I +
                                ",-" + J + ")" + at)};
}

// Braids with a downward strand of color i next to an upward i, and j with
// (a_i, a_j) < 0. `left` puts the downward strand on the left of the bottom.
inline Identity triple_hard(const CartanDatum& D, const Parameters& P, int i, int j, const Weight& w, bool left) {
  std::string I = lab(D, i), J = lab(D, j), at = " @ " + w.render();
  Morphism lhs, rhs;
  const int d = D.dij(i, j);
  std::vector<std::pair<std::vector<int>, Scalar>> terms;  // (l1, q, l2) with coefficient
  for (int l1 = 0; l1 < d; ++l1) terms.push_back({{l1, 0, d - 1 - l1}, P.t(i, j)});
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < D.dij(j, i); ++q)
      if (D.s_admissible(i, j, p, q))
        for (int l1 = 0; l1 < p; ++l1) terms.push_back({{l1, q, p - 1 - l1}, P.s(i, j, p, q)});
  if (left) {
    lhs = parse_morphism(D, "x(-" + I + ",+" + I + ")|id(+" + J + ") ; id(+" + I + ")|x(-" + I + ",+" + J + ") ; x(+" + I + ",+" + J + ")|id(-" +
                                I + ")" + at) -
          parse_morphism(D, "id(-" + I + ")|x(+" + I + ",+" + J + ") ; x(-" + I + ",+" + J + ")|id(+" + I + ") ; id(+" + J + ")|x(-" + I + ",+" +
                                I + ")" + at);
    rhs = Morphism(lhs.source(), lhs.target());
    for (const auto& [e, c] : terms) {
      std::vector<std::string> s = times("id(-" + I + ")|dot(+" + I + ")|id(+" + J + ")", e[0]);
      append(s, times("id(-" + I + ")|id(+" + I + ")|dot(+" + J + ")", e[1]));
      s.push_back("cap(ef," + I + ")|id(+" + J + ")");
      s.push_back("id(+" + J + ")|cup(ef," + I + ")");
      append(s, times("id(+" + J + ")|dot(+" + I + ")|id(-" + I + ")", e[2]));
      rhs -= parse_morphism(D, join_slices(s) + at) * c;
    }
  } else {
    lhs = parse_morphism(D, "x(+" + J + ",+" + I + ")|id(-" + I + ") ; id(+" + I + ")|x(+" + J + ",-" + I + ") ; x(+" + I + ",-" + I + ")|id(+" +
                                J + ")" + at) -
          parse_morphism(D, "id(+" + J + ")|x(+" + I + ",-" + I + ") ; x(+" + J + ",-" + I + ")|id(+" + I + ") ; id(-" + I + ")|x(+" + J + ",+" +
                                I + ")" + at);
    rhs = Morphism(lhs.source(), lhs.target());
    for (const auto& [e, c] : terms) {
      std::vector<std::string> s = times("id(+" + J + ")|dot(+" + I + ")|id(-" + I + ")", e[0]);
      append(s, times("dot(+" + J + ")|id(+" + I + ")|id(-" + I + ")", e[1]));
      s.push_back("id(+" + J + ")|cap(fe," + I + ")");
      s.push_back("cup(fe," + I + ")|id(+" + J + ")");
      append(s, times("id(-" + I + ")|dot(+" + I + ")|id(+" + J + ")", e[2]));
      rhs -= parse_morphism(D, join_slices(s) + at) * c;
    }
  }
  return {lhs, rhs};
}

// Random upward diagram: n strands, up to `gens` crossings, up to `dots` dots per strand.
inline Diagram random_upward(const CartanDatum& D, std::mt19937_64& rng, int n, int gens, int dots) {
  Seq seq;
  for (int k = 0; k < n; ++k) seq.push_back({static_cast<int>(rng() % D.rank()), 1});
  std::vector<int> c(D.rank());
  for (auto& x : c) x = static_cast<int>(rng() % 5) - 2;
  OneMorphism src{seq, Weight::from_coords(D, c), 0};
  std::vector<Generator> g;
  std::vector<int> used(n, 0);
  Seq cur = seq;
  const int total = static_cast<int>(rng() % (gens + 1)) + static_cast<int>(rng() % (dots * n + 1));
  for (int t = 0; t < total; ++t) {
    bool dot = n < 2 || rng() % 2;
    if (dot) {
      int k = static_cast<int>(rng() % n);
      if (used[k] >= dots) continue;
      ++used[k];
      g.push_back(Generator::dot(k, cur[k].color, 1));
    } else {
      int k = static_cast<int>(rng() % (n - 1));
      g.push_back(crossing_for(k, cur[k], cur[k + 1]));
      std::swap(cur[k], cur[k + 1]);
    }
  }
  return Diagram(src, g);
}


/// Random diagram over all generator kinds, kept to at most 6 strands.
inline Diagram random_diagram(const CartanDatum& D, std::mt19937_64& rng, int steps, const Weight* weight = nullptr) {
  Seq seq;
  const int n0 = static_cast<int>(rng() % 4);
  for (int k = 0; k < n0; ++k) seq.push_back({static_cast<int>(rng() % D.rank()), rng() % 2 ? 1 : -1});
  std::vector<int> c(D.rank());
  for (auto& x : c) x = static_cast<int>(rng() % 7) - 3;
  OneMorphism src{seq, weight ? *weight : Weight::from_coords(D, c), 0};
  std::vector<Generator> g;
  Seq cur = seq;
  for (int t = 0; t < steps; ++t) {
    const int n = static_cast<int>(cur.size());
    const int i = static_cast<int>(rng() % D.rank());
    switch (rng() % 5) {
      case 0:
        if (n) {
          int k = static_cast<int>(rng() % n);
          g.push_back(Generator::dot(k, cur[k].color, cur[k].sign));
        }
        break;
      case 1:
        if (n >= 2) {
          int k = static_cast<int>(rng() % (n - 1));
          g.push_back(crossing_for(k, cur[k], cur[k + 1]));
          std::swap(cur[k], cur[k + 1]);
        }
        break;
      case 2:
        if (n <= 4) {
          int k = static_cast<int>(rng() % (n + 1));
          bool ef = rng() % 2;
          g.push_back(Generator::cupcap(ef ? Gen::CupPFE : Gen::CupPEF, k, i));
          cur.insert(cur.begin() + k, {Strand{i, ef ? 1 : -1}, Strand{i, ef ? -1 : 1}});
        }
        break;
      case 3:
        for (int k = 0; k + 1 < n; ++k)
          if (cur[k].color == cur[k + 1].color && cur[k].sign == -cur[k + 1].sign) {
            g.push_back(Generator::cupcap(cur[k].sign > 0 ? Gen::CapCFE : Gen::CapCEF, k, cur[k].color));
            cur.erase(cur.begin() + k, cur.begin() + k + 2);
            break;
          }
        break;
      default:
        g.push_back(Generator::bubble(static_cast<int>(rng() % (n + 1)), i, rng() % 2, static_cast<int>(rng() % 3)));
    }
  }
  return Diagram(src, g);
}

}  // namespace ucyc::testing
