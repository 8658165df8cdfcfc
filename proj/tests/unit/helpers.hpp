#pragma once

#include <random>

#include "ucyc/diagram.hpp"

namespace ucyc::testing {

/// Random well-typed slice diagram: up to 3 boundary strands, up to 6 slices.
inline Diagram random_diagram(const CartanDatum& D, std::mt19937& rng) {
  std::uniform_int_distribution<int> col(0, D.rank() - 1), coin(0, 1), small(-2, 2);
  Seq seq;
  int n = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int k = 0; k < n; ++k) seq.push_back({col(rng), coin(rng) ? 1 : -1});
  std::vector<int> coords(D.rank());
  for (auto& c : coords) c = small(rng);
  OneMorphism src{seq, Weight::from_coords(D, coords), 0};
  std::vector<Generator> gens;
  Seq cur = seq;
  int steps = std::uniform_int_distribution<int>(0, 6)(rng);
  for (int s = 0; s < steps; ++s) {
    int w = static_cast<int>(cur.size());
    int choice = std::uniform_int_distribution<int>(0, 4)(rng);
    Generator g;
    if (choice == 0 && w > 0) {
      int p = std::uniform_int_distribution<int>(0, w - 1)(rng);
      g = Generator::dot(p, cur[p].color, cur[p].sign);
    } else if (choice == 1 && w > 1) {
      int p = std::uniform_int_distribution<int>(0, w - 2)(rng);
      g = crossing_for(p, cur[p], cur[p + 1]);
    } else if (choice == 2 && w < 5) {
      int p = std::uniform_int_distribution<int>(0, w)(rng);
      g = Generator::cupcap(coin(rng) ? Gen::CupPEF : Gen::CupPFE, p, col(rng));
    } else if (choice == 3 && w > 1) {
      int p = std::uniform_int_distribution<int>(0, w - 2)(rng);
      if (cur[p].color != cur[p + 1].color || cur[p].sign == cur[p + 1].sign) continue;
      g = Generator::cupcap(cur[p].sign > 0 ? Gen::CapCFE : Gen::CapCEF, p, cur[p].color);
    } else {
      int p = std::uniform_int_distribution<int>(0, w)(rng);
      g = Generator::bubble(p, col(rng), coin(rng), small(rng) + 2);
    }
    gens.push_back(g);
    cur = Diagram(src, gens).target_seq();
  }
  return Diagram(src, gens);
}

}  // namespace ucyc::testing
