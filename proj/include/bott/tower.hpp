#pragma once

// Generalized Bott towers X_m -> ... -> X_1 -> pt given by the integers
// (m; n_1..n_m; a_{i,j}^{(k)}), and their fans.
//
// Lattice N = Z^n with basis e_i^k (stage i, 1 <= k <= n_i) ordered stage by
// stage. Rays are u_i^k = e_i^k and
//
//   u_i^0 = -sum_k e_i^k + sum_{j>i} sum_k a_{j,i}^{(k)} e_j^k,
//
// and a maximal cone omits exactly one ray from every stage.

#include "bott/fan.hpp"

#include <string>
#include <vector>

namespace bott {

// Ray u_stage^k; stage is 1-based, 0 <= k <= n_stage.
struct RayLabel {
  int stage = 0;
  int k = 0;

  friend auto operator<=>(const RayLabel&, const RayLabel&) = default;
};

std::string to_string(const RayLabel& label);  // "stage:k"
RayLabel parse_ray_label(const std::string& text);

struct BottTowerSpec {
  std::vector<int> dims;
  // twists[i-1][k-1][j-1] = a_{i,j}^{(k)}; twists[0] is empty.
  std::vector<std::vector<IntVector>> twists;

  [[nodiscard]] int stages() const { return static_cast<int>(dims.size()); }
  [[nodiscard]] int dimension() const;

  // Coordinate offset of stage i (1-based) in N.
  [[nodiscard]] int offset(int stage) const;

  // Throws std::invalid_argument naming the offending stage/slot.
  // A zero-stage spec (the point) is accepted only when allow_point is set.
  void validate(bool allow_point = false) const;

  friend bool operator==(const BottTowerSpec&, const BottTowerSpec&) = default;
};

// All twists zero.
BottTowerSpec product_spec(const std::vector<int>& dims);
// F_l: m = 2, n_1 = n_2 = 1, a_{2,1}^{(1)} = l.
BottTowerSpec hirzebruch_spec(std::int64_t l);

struct TowerFan {
  Fan fan;
  std::vector<RayLabel> labels;  // per ray

  [[nodiscard]] RayIndex ray(int stage, int k) const;
  [[nodiscard]] RayIndex ray(const RayLabel& label) const { return ray(label.stage, label.k); }
};

// Rays ordered stage by stage, k = 0..n_i within a stage.
TowerFan build_fan(const BottTowerSpec& spec);

struct StageProjection {
  BottTowerSpec source;
  BottTowerSpec target;  // stages 1..i-1
  LatticeMap map;        // drops the coordinates of stages >= i
};

// Projection X_m -> X_{i-1}; verifies that every maximal cone maps into a
// cone of the target fan.
StageProjection stage_projection(const BottTowerSpec& spec, int stage);

BottTowerSpec truncate(const BottTowerSpec& spec, int stages);

// Blow-up of a point on P^n as P(O + O(1)) over P^{n-1}: dims [n-1, 1] with
// a_{2,1}^{(k)} = 1.
BottTowerSpec blowup_point_spec(int n);

// Boundary E + D_2 + ... + D_n of that blow-up: E = u_2^1 (the exceptional
// section) and D_{k+1} = u_1^k, strict transforms of hyperplanes through the
// blown-up point.
std::vector<RayLabel> blowup_point_boundary(int n);

// P^n blown up successively along P^0 and the strict transforms of
// P^1 ... P^{n-2}, where P^k = V(<e_{k+1}, ..., e_n>).
Fan blowup_flag_fan(int n);

// {"dims": [...], "twists": [stage-2 entry, ...]}
std::string spec_to_json(const BottTowerSpec& spec);
BottTowerSpec spec_from_json(const std::string& text);

}  // namespace bott
