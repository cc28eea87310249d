#pragma once

// Seeded random inputs shared by the property tests.

#include "bott/fan.hpp"
#include "bott/tower.hpp"

#include <random>
#include <vector>

namespace bott::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random composition of n into a random number of parts.
inline std::vector<int> random_composition(Rng& rng, int n) {
  std::vector<int> dims;
  int left = n;
  while (left > 0) {
    int d = uniform(rng, 1, left);
    dims.push_back(d);
    left -= d;
  }
  return dims;
}

inline BottTowerSpec random_spec(Rng& rng, int n, int bound) {
  BottTowerSpec s = product_spec(random_composition(rng, n));
  for (auto& stage : s.twists) {
    for (auto& v : stage) {
      for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = uniform(rng, -bound, bound);
    }
  }
  return s;
}

// Random face (of dimension >= 2) of a random maximal cone.
inline Cone random_face(Rng& rng, const Fan& fan, int min_dim = 2) {
  const Cone& sigma = fan.max_cones[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(fan.max_cones.size()) - 1))];
  Cone tau;
  while (static_cast<int>(tau.size()) < min_dim) {
    tau.clear();
    for (auto r : sigma) {
      if (uniform(rng, 0, 1) == 1) tau.push_back(r);
    }
  }
  return tau;
}

// A tower fan followed by a few random star subdivisions.
inline Fan random_blown_up_fan(Rng& rng, int n, int bound, int blowups) {
  Fan f = build_fan(random_spec(rng, n, bound)).fan;
  for (int i = 0; i < blowups && n >= 2; ++i) f = star_subdivision(f, random_face(rng, f));
  return f;
}

// Same fan with rays shuffled and coordinates changed by a random unimodular map.
inline Fan scrambled(Rng& rng, const Fan& f, IntMatrix* applied = nullptr) {
  IntMatrix g = IntMatrix::Identity(f.rank, f.rank);
  for (int step = 0; step < 3 * f.rank && f.rank >= 2; ++step) {
    int i = uniform(rng, 0, f.rank - 1);
    int j = uniform(rng, 0, f.rank - 2);
    if (j >= i) ++j;
    Integer c = uniform(rng, -1, 1);
    g.row(i) = (g.row(i) + g.row(j) * c).eval();
  }
  if (f.rank >= 1 && uniform(rng, 0, 1) == 1) g.row(0) = (-g.row(0)).eval();
  std::vector<RayIndex> perm(f.rays.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<RayIndex>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  Fan out;
  out.rank = f.rank;
  out.rays.resize(f.rays.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out.rays[static_cast<std::size_t>(perm[i])] = g * f.rays[i];
  for (const auto& c : f.max_cones) {
    Cone d;
    for (auto r : c) d.push_back(perm[static_cast<std::size_t>(r)]);
    out.max_cones.push_back(make_cone(d));
  }
  if (applied) *applied = g;
  return out;
}

}  // namespace bott::testing
