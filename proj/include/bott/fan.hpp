#pragma once

// Smooth complete fans in N = Z^n: validation, star fans (orbit closures),
// star subdivisions (torus-invariant blow-ups) and lattice isomorphism.

#include "bott/scalar.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bott {

using LatticeVector = IntVector;
using RayIndex = int;

// Sorted set of ray indices into a Fan's ray list.
using Cone = std::vector<RayIndex>;

Cone make_cone(std::vector<RayIndex> rays);

// true when `sub` is a subset of `super` (both sorted).
bool is_face(const Cone& sub, const Cone& super);

struct Fan {
  int rank = 0;
  std::vector<LatticeVector> rays;
  std::vector<Cone> max_cones;

  [[nodiscard]] int ray_count() const { return static_cast<int>(rays.size()); }

  // Matrix whose columns are the rays of `cone`, in the cone's order.
  [[nodiscard]] IntMatrix cone_matrix(const Cone& cone) const;

  // Indices of maximal cones having `tau` as a face.
  [[nodiscard]] std::vector<int> cones_containing(const Cone& tau) const;

  [[nodiscard]] bool is_cone(const Cone& tau) const { return !cones_containing(tau).empty(); }

  // Index of the ray equal to v, or -1.
  [[nodiscard]] RayIndex find_ray(const LatticeVector& v) const;

  friend bool operator==(const Fan&, const Fan&) = default;
};

// A codimension-one cone with the maximal cones containing it.
struct WallIncidence {
  Cone wall;
  std::vector<int> cones;
};

// Every (rank-1)-face of a maximal cone, sorted, with its incident cones.
std::vector<WallIncidence> wall_incidences(const Fan& fan);

struct ValidationReport {
  std::vector<std::string> problems;

  [[nodiscard]] bool ok() const { return problems.empty(); }
  explicit operator bool() const { return ok(); }
};

// Checks primitive rays, smooth maximal cones, two cones per wall on opposite
// sides, wall-graph connectivity, and (randomized, seeded) that a generic
// rational point lies in exactly one maximal cone.
ValidationReport validate_fan(const Fan& fan, std::uint64_t seed = 0x5eedu);

struct LatticeMap {
  IntMatrix matrix;

  [[nodiscard]] LatticeVector apply(const LatticeVector& v) const { return matrix * v; }
};

// Star (orbit-closure) fan of a cone, in the quotient lattice N / span(tau).
struct StarFan {
  Fan fan;
  Cone tau;
  // star ray index -> ambient ray index
  std::vector<RayIndex> ambient_ray;
  // (rank - dim tau) x rank integer matrix realizing N -> N / span(tau)
  IntMatrix projection;

  // Star ray index for an ambient ray adjacent to tau, or -1.
  [[nodiscard]] RayIndex star_ray(RayIndex ambient) const;
};

StarFan star_fan(const Fan& fan, const Cone& tau);

// Blow-up along V(tau): inserts the ray sum of tau and re-triangulates the star.
// The new ray is appended at the end of the ray list.
Fan star_subdivision(const Fan& fan, const Cone& tau);

struct FanIsomorphism {
  LatticeMap map;
  std::vector<RayIndex> ray_map;  // ray of f1 -> ray of f2
};

// Unimodular maps carrying rays to rays and maximal cones to maximal cones.
// Optional per-ray colors must be preserved. The search enumerates all images
// of one reference maximal cone, so it is exhaustive.
std::optional<FanIsomorphism> fan_isomorphic(const Fan& f1, const Fan& f2);
std::optional<FanIsomorphism> fan_isomorphic(const Fan& f1, const Fan& f2, std::span<const int> colors1,
                                             std::span<const int> colors2);
std::vector<FanIsomorphism> fan_isomorphisms(const Fan& f1, const Fan& f2, std::span<const int> colors1,
                                             std::span<const int> colors2);

// true when the map sends rays to rays and cones to cones bijectively.
bool verify_isomorphism(const Fan& f1, const Fan& f2, const FanIsomorphism& iso);

// Rays sorted lexicographically, cones as sorted index sets, sorted.
// `old_to_new` (optional) receives the ray permutation.
Fan canonical_fan(const Fan& fan, std::vector<RayIndex>* old_to_new = nullptr);

// Line-oriented text format of the canonical fan.
std::string write_fan(const Fan& fan);
Fan read_fan(std::string_view text);

// Standard fans.
Fan projective_space_fan(int n);
Fan product_fan(const Fan& a, const Fan& b);

}  // namespace bott
