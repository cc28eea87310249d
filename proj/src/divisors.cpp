#include "bott/divisors.hpp"

#include "bott/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace bott {

namespace {

template <typename Scalar>
Scalar from_rational(const Rational& x);

template <>
Integer from_rational<Integer>(const Rational& x) {
  if (!x.is_integer()) throw std::logic_error("expected an integral value, got " + x.str());
  return x.num();
}

template <>
Rational from_rational<Rational>(const Rational& x) {
  return x;
}

template <typename Scalar>
ToricDivisor<Scalar> principal(const Fan& fan, const Vector<Scalar>& m) {
  ToricDivisor<Scalar> d{Vector<Scalar>(fan.ray_count())};
  for (RayIndex r = 0; r < fan.ray_count(); ++r) {
    Scalar s = Scalar(0);
    const auto& v = fan.rays[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < v.size(); ++i) s += m[i] * Scalar(v[i]);
    d.coeffs[r] = s;
  }
  return d;
}

void check_size(const Fan& fan, int size) {
  if (size != fan.ray_count()) {
    throw std::invalid_argument("divisor has " + std::to_string(size) + " coefficients, fan has " +
                                std::to_string(fan.ray_count()) + " rays");
  }
}

}  // namespace

QDivisor to_rational(const Divisor& d) { return {to_rational(d.coeffs)}; }

Divisor zero_divisor(const Fan& fan) { return {IntVector::Zero(fan.ray_count())}; }

Divisor ray_divisor(const Fan& fan, const std::vector<RayIndex>& rays) {
  Divisor d = zero_divisor(fan);
  for (auto r : rays) {
    if (r < 0 || r >= fan.ray_count()) throw std::invalid_argument("ray index out of range");
    d.coeffs[r] += 1;
  }
  return d;
}

Divisor canonical_divisor(const Fan& fan) { return {IntVector::Constant(fan.ray_count(), Integer(-1))}; }

Divisor principal_divisor(const Fan& fan, const IntVector& m) { return principal<Integer>(fan, m); }

IntVector Wall::curve_class() const {
  IntVector c = b;
  c[v] += 1;
  c[v_prime] += 1;
  return c;
}

std::vector<Wall> walls(const Fan& fan) {
  std::vector<Wall> out;
  for (const auto& inc : wall_incidences(fan)) {
    if (inc.cones.size() != 2) {
      throw std::invalid_argument("wall lies in " + std::to_string(inc.cones.size()) + " maximal cones");
    }
    Wall w;
    w.rays = inc.wall;
    w.cones[0] = inc.cones[0];
    w.cones[1] = inc.cones[1];
    const Cone& s0 = fan.max_cones[static_cast<std::size_t>(inc.cones[0])];
    const Cone& s1 = fan.max_cones[static_cast<std::size_t>(inc.cones[1])];
    for (auto r : s0) {
      if (!std::binary_search(w.rays.begin(), w.rays.end(), r)) w.v = r;
    }
    for (auto r : s1) {
      if (!std::binary_search(w.rays.begin(), w.rays.end(), r)) w.v_prime = r;
    }
    IntVector c = unimodular_inverse(fan.cone_matrix(s0)) * fan.rays[static_cast<std::size_t>(w.v_prime)];
    w.b = IntVector::Zero(fan.ray_count());
    for (std::size_t i = 0; i < s0.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      if (s0[i] == w.v) {
        if (c[idx] != -1) throw std::logic_error("wall relation: cones are not adjacent smooth cones");
      } else {
        w.b[s0[i]] = -c[idx];
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

template <typename Scalar>
Scalar intersection_number(const ToricDivisor<Scalar>& d, const Wall& w) {
  if (d.coeffs.size() != w.b.size()) throw std::invalid_argument("divisor and wall live on different fans");
  Scalar s = d.coeffs[w.v] + d.coeffs[w.v_prime];
  for (auto r : w.rays) s += Scalar(w.b[r]) * d.coeffs[r];
  return s;
}

int picard_rank(const Fan& fan) { return fan.ray_count() - fan.rank; }

std::vector<RayIndex> class_basis(const Fan& fan) {
  std::vector<RayIndex> out;
  const Cone& pivot = fan.max_cones.front();
  for (RayIndex r = 0; r < fan.ray_count(); ++r) {
    if (!std::binary_search(pivot.begin(), pivot.end(), r)) out.push_back(r);
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> local_character(const Fan& fan, const ToricDivisor<Scalar>& d, const Cone& sigma) {
  check_size(fan, d.size());
  QMatrix bt = to_rational(IntMatrix(fan.cone_matrix(sigma).transpose()));
  QVector rhs(static_cast<Eigen::Index>(sigma.size()));
  for (std::size_t i = 0; i < sigma.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = -Rational(d.coeffs[sigma[i]]);
  auto inv = inverse(bt);
  if (!inv) throw std::invalid_argument("local character on a non-maximal cone");
  QVector m = *inv * rhs;
  Vector<Scalar> out(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) out[i] = from_rational<Scalar>(m[i]);
  return out;
}

template <typename Scalar>
DivisorClass<Scalar> divisor_class(const Fan& fan, const ToricDivisor<Scalar>& d) {
  Vector<Scalar> m = local_character(fan, d, fan.max_cones.front());
  ToricDivisor<Scalar> reduced = d + principal(fan, m);
  auto basis = class_basis(fan);
  DivisorClass<Scalar> c{Vector<Scalar>(static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t i = 0; i < basis.size(); ++i) c.coords[static_cast<Eigen::Index>(i)] = reduced.coeffs[basis[i]];
  return c;
}

const char* to_string(Positivity p) {
  switch (p) {
    case Positivity::ample: return "ample";
    case Positivity::nef_not_ample: return "nef-not-ample";
    case Positivity::not_nef: return "not-nef";
  }
  return "?";
}

template <typename Scalar>
Positivity positivity(const std::vector<Wall>& ws, const ToricDivisor<Scalar>& d) {
  bool ample = true;
  for (const auto& w : ws) {
    Scalar x = intersection_number(d, w);
    if (x < Scalar(0)) return Positivity::not_nef;
    if (x == Scalar(0)) ample = false;
  }
  return ample ? Positivity::ample : Positivity::nef_not_ample;
}

template <typename Scalar>
Positivity positivity(const Fan& fan, const ToricDivisor<Scalar>& d) {
  check_size(fan, d.size());
  return positivity(walls(fan), d);
}

template <typename Scalar>
Positivity positivity_oracle(const Fan& fan, const ToricDivisor<Scalar>& d) {
  check_size(fan, d.size());
  QDivisor q{to_rational(d.coeffs)};
  bool ample = true;
  for (const auto& sigma : fan.max_cones) {
    QVector m = local_character(fan, q, sigma);
    for (RayIndex r = 0; r < fan.ray_count(); ++r) {
      if (std::binary_search(sigma.begin(), sigma.end(), r)) continue;
      Rational value = dot(m, to_rational(fan.rays[static_cast<std::size_t>(r)]));
      Rational bound = -q.coeffs[r];
      if (value < bound) return Positivity::not_nef;
      if (value == bound) ample = false;
    }
  }
  return ample ? Positivity::ample : Positivity::nef_not_ample;
}

template <typename Scalar>
std::vector<int> non_positive_walls(const std::vector<Wall>& ws, const ToricDivisor<Scalar>& d) {
  std::vector<int> out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (intersection_number(d, ws[i]) <= Scalar(0)) out.push_back(static_cast<int>(i));
  }
  return out;
}

NefValue nef_value(const Fan& fan, const Divisor& l) {
  check_size(fan, l.size());
  auto ws = walls(fan);
  if (positivity(ws, l) != Positivity::ample) throw std::invalid_argument("nef value needs an ample divisor");
  Divisor k = canonical_divisor(fan);
  NefValue out;
  bool found = false;
  for (const auto& w : ws) {
    Integer kw = intersection_number(k, w);
    if (kw >= 0) continue;
    Rational ratio(-kw, intersection_number(l, w));
    if (!found || ratio > out.tau) {
      out.tau = ratio;
      out.trivial_walls.clear();
      found = true;
    }
    if (ratio == out.tau) out.trivial_walls.push_back(w);
  }
  if (!found) throw std::invalid_argument("canonical divisor is nef; nef value undefined");
  return out;
}

Integer extremal_length(const Fan& fan, const Wall& w) {
  Integer kw = intersection_number(canonical_divisor(fan), w);
  if (kw >= 0) throw std::invalid_argument("extremal length needs a K-negative wall");
  return -kw;
}

template <typename Scalar>
Restriction<Scalar> restrict_to_stratum(const Fan& fan, const ToricDivisor<Scalar>& d, const Cone& tau) {
  check_size(fan, d.size());
  Restriction<Scalar> out{star_fan(fan, tau), {}};
  const Cone& sigma = fan.max_cones[static_cast<std::size_t>(fan.cones_containing(make_cone(tau)).front())];
  ToricDivisor<Scalar> moved = d + principal(fan, local_character(fan, d, sigma));
  out.divisor.coeffs.resize(out.star.fan.ray_count());
  for (RayIndex s = 0; s < out.star.fan.ray_count(); ++s) {
    out.divisor.coeffs[s] = moved.coeffs[out.star.ambient_ray[static_cast<std::size_t>(s)]];
  }
  return out;
}

IntersectionTable intersection_table(const Fan& fan) {
  IntersectionTable t{class_basis(fan), walls(fan), {}};
  t.entries = IntMatrix::Zero(static_cast<Eigen::Index>(t.basis.size()), static_cast<Eigen::Index>(t.walls.size()));
  for (std::size_t j = 0; j < t.walls.size(); ++j) {
    IntVector c = t.walls[j].curve_class();
    for (std::size_t i = 0; i < t.basis.size(); ++i) {
      t.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[t.basis[i]];
    }
  }
  return t;
}

#define BOTT_INSTANTIATE(S)                                                                              \
  template S intersection_number(const ToricDivisor<S>&, const Wall&);                                  \
  template Vector<S> local_character(const Fan&, const ToricDivisor<S>&, const Cone&);                  \
  template DivisorClass<S> divisor_class(const Fan&, const ToricDivisor<S>&);                           \
  template Positivity positivity(const std::vector<Wall>&, const ToricDivisor<S>&);                     \
  template Positivity positivity(const Fan&, const ToricDivisor<S>&);                                   \
  template Positivity positivity_oracle(const Fan&, const ToricDivisor<S>&);                            \
  template std::vector<int> non_positive_walls(const std::vector<Wall>&, const ToricDivisor<S>&);       \
  template Restriction<S> restrict_to_stratum(const Fan&, const ToricDivisor<S>&, const Cone&);

BOTT_INSTANTIATE(Integer)
BOTT_INSTANTIATE(Rational)

#undef BOTT_INSTANTIATE

}  // namespace bott
