#pragma once

// Torus-invariant divisors on smooth complete fans: classes, walls (invariant
// curves), intersection numbers, positivity, nef value and restriction to
// orbit closures.

#include "bott/fan.hpp"

#include <vector>

namespace bott {

template <typename Scalar>
struct ToricDivisor {
  Vector<Scalar> coeffs;  // one per ray

  [[nodiscard]] int size() const { return static_cast<int>(coeffs.size()); }

  friend ToricDivisor operator+(const ToricDivisor& a, const ToricDivisor& b) { return {a.coeffs + b.coeffs}; }
  friend ToricDivisor operator-(const ToricDivisor& a, const ToricDivisor& b) { return {a.coeffs - b.coeffs}; }
  friend ToricDivisor operator*(const Scalar& t, const ToricDivisor& a) { return {a.coeffs * t}; }
  friend bool operator==(const ToricDivisor&, const ToricDivisor&) = default;
};

using Divisor = ToricDivisor<Integer>;
using QDivisor = ToricDivisor<Rational>;

QDivisor to_rational(const Divisor& d);

Divisor zero_divisor(const Fan& fan);
// Sum of D_r over the given rays.
Divisor ray_divisor(const Fan& fan, const std::vector<RayIndex>& rays);
// K = -(sum of all D_r).
Divisor canonical_divisor(const Fan& fan);
// div(chi^m) = sum <m, v_r> D_r.
Divisor principal_divisor(const Fan& fan, const IntVector& m);

// Invariant curve V(wall) with the relation v + v' + sum b_r r = 0.
struct Wall {
  Cone rays;
  RayIndex v = -1;        // completes the wall in cones[0]
  RayIndex v_prime = -1;  // completes the wall in cones[1]
  IntVector b;            // per ray of the fan, zero off the wall
  int cones[2] = {-1, -1};

  // D_r . C for every ray r: 1 on v and v', b_r on the wall.
  [[nodiscard]] IntVector curve_class() const;
};

// Sorted by wall ray set. Throws std::invalid_argument for a wall without
// exactly two cones.
std::vector<Wall> walls(const Fan& fan);

template <typename Scalar>
Scalar intersection_number(const ToricDivisor<Scalar>& d, const Wall& w);

// Picard group Z^(rays - n). Classes are represented by the unique linearly
// equivalent divisor vanishing on the rays of the first maximal cone (the
// pivot cone); the coordinates are its coefficients on the remaining rays.
template <typename Scalar>
struct DivisorClass {
  Vector<Scalar> coords;

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
};

int picard_rank(const Fan& fan);
// Rays outside the pivot cone, in increasing order; their D_r form a basis.
std::vector<RayIndex> class_basis(const Fan& fan);

template <typename Scalar>
DivisorClass<Scalar> divisor_class(const Fan& fan, const ToricDivisor<Scalar>& d);

// The unique m with <m, v_r> = -a_r for r in sigma, so that d + div(chi^m)
// vanishes on sigma.
template <typename Scalar>
Vector<Scalar> local_character(const Fan& fan, const ToricDivisor<Scalar>& d, const Cone& sigma);

enum class Positivity { ample, nef_not_ample, not_nef };

const char* to_string(Positivity p);

// Toric Kleiman criterion on walls.
template <typename Scalar>
Positivity positivity(const Fan& fan, const ToricDivisor<Scalar>& d);
template <typename Scalar>
Positivity positivity(const std::vector<Wall>& walls, const ToricDivisor<Scalar>& d);

// Independent check through convexity of the support function: one local
// character per maximal cone, compared against every ray.
template <typename Scalar>
Positivity positivity_oracle(const Fan& fan, const ToricDivisor<Scalar>& d);

// Indices of walls with d . w <= 0.
template <typename Scalar>
std::vector<int> non_positive_walls(const std::vector<Wall>& walls, const ToricDivisor<Scalar>& d);

struct NefValue {
  Rational tau;
  std::vector<Wall> trivial_walls;  // walls with (K + tau L) . w = 0 among K-negative ones
};

// tau = max over K-negative walls of (-K.w)/(L.w). Throws std::invalid_argument
// when L is not ample or K is nef.
NefValue nef_value(const Fan& fan, const Divisor& l);

// -K . C_w; throws std::invalid_argument when K . w >= 0.
Integer extremal_length(const Fan& fan, const Wall& w);

template <typename Scalar>
struct Restriction {
  StarFan star;
  ToricDivisor<Scalar> divisor;  // on star.fan
};

// O(D)|_{V(tau)} written as a torus-invariant divisor on the star fan. Works
// also when V(tau) lies in the support of D.
template <typename Scalar>
Restriction<Scalar> restrict_to_stratum(const Fan& fan, const ToricDivisor<Scalar>& d, const Cone& tau);

// Rows: D_r for r in class_basis(fan); columns: walls(fan).
struct IntersectionTable {
  std::vector<RayIndex> basis;
  std::vector<Wall> walls;
  IntMatrix entries;
};

IntersectionTable intersection_table(const Fan& fan);

}  // namespace bott
