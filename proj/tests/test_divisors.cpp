#include "bott/divisors.hpp"
#include "bott/linalg.hpp"
#include "bott/tower.hpp"
#include "generators.hpp"

#include "doctest.h"

#include <set>

using namespace bott;
using bott::testing::Rng;

namespace {

const Wall& wall_with_rays(const std::vector<Wall>& ws, Cone rays) {
  rays = make_cone(rays);
  for (const auto& w : ws) {
    if (w.rays == rays) return w;
  }
  throw std::logic_error("no such wall");
}

Divisor random_divisor(Rng& rng, const Fan& fan, int bound) {
  Divisor d = zero_divisor(fan);
  for (RayIndex r = 0; r < fan.ray_count(); ++r) d.coeffs[r] = bott::testing::uniform(rng, -bound, bound);
  return d;
}

IntVector random_character(Rng& rng, int rank, int bound) {
  IntVector m(rank);
  for (int i = 0; i < rank; ++i) m[i] = bott::testing::uniform(rng, -bound, bound);
  return m;
}

}  // namespace

TEST_CASE("canonical class of P^2 is -3H") {
  Fan p2 = projective_space_fan(2);
  Divisor k = canonical_divisor(p2);
  CHECK(k.coeffs == IntVector::Constant(3, Integer(-1)));
  auto h = divisor_class(p2, ray_divisor(p2, {0}));
  CHECK(divisor_class(p2, k).coords == h.coords * Integer(-3));
  CHECK(picard_rank(p2) == 1);
  auto ws = walls(p2);
  CHECK(ws.size() == 3);
  for (const auto& w : ws) {
    CHECK(w.b.sum() == 1);
    CHECK(intersection_number(k, w) == -3);
    CHECK(extremal_length(p2, w) == 3);
  }
}

TEST_CASE("wall relations hold in the lattice") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 2, trial % 3);
    for (const auto& w : walls(f)) {
      LatticeVector sum = f.rays[static_cast<std::size_t>(w.v)] + f.rays[static_cast<std::size_t>(w.v_prime)];
      for (auto r : w.rays) sum += f.rays[static_cast<std::size_t>(r)] * w.b[r];
      CHECK(sum.isZero());
      for (RayIndex r = 0; r < f.ray_count(); ++r) {
        if (!std::binary_search(w.rays.begin(), w.rays.end(), r)) CHECK(w.b[r] == 0);
      }
    }
  }
}

TEST_CASE("Hirzebruch surface walls") {
  for (int l = 0; l <= 5; ++l) {
    TowerFan t = build_fan(hirzebruch_spec(l));
    auto ws = walls(t.fan);
    CHECK(ws.size() == 4);
    Divisor k = canonical_divisor(t.fan);
    const Wall& s = wall_with_rays(ws, {t.ray(2, 1)});
    const Wall& f = wall_with_rays(ws, {t.ray(1, 1)});
    CHECK(intersection_number(ray_divisor(t.fan, {t.ray(2, 1)}), s) == -l);
    CHECK(intersection_number(k, s) == -(2 - l));
    CHECK(intersection_number(k, f) == -2);
    CHECK(extremal_length(t.fan, f) == 2);
    CHECK(picard_rank(t.fan) == 2);
  }
  Fan p1p1 = build_fan(hirzebruch_spec(0)).fan;
  auto table = intersection_table(p1p1);
  CHECK(table.entries.rows() == 2);
  CHECK(table.entries.cols() == 4);
  std::set<std::vector<std::int64_t>> classes;
  for (Eigen::Index j = 0; j < table.entries.cols(); ++j) {
    std::vector<std::int64_t> col;
    for (Eigen::Index i = 0; i < table.entries.rows(); ++i) col.push_back(table.entries(i, j).value());
    classes.insert(col);
  }
  CHECK(classes.size() == 2);
}

TEST_CASE("blow-up of a point: canonical class and curve degrees") {
  for (int n = 2; n <= 6; ++n) {
    TowerFan t = build_fan(blowup_point_spec(n));
    const Fan& fan = t.fan;
    RayIndex e = t.ray(2, 1);
    Divisor ed = ray_divisor(fan, {e});
    // A hyperplane through the blown-up point is its strict transform plus E.
    Divisor h = ray_divisor(fan, {t.ray(1, 1), e});
    Divisor k = canonical_divisor(fan);
    Divisor expected = Integer(-(n + 1)) * h + Integer(n - 1) * ed;
    CHECK(divisor_class(fan, k) == divisor_class(fan, expected));
    CHECK(picard_rank(fan) == 2);

    std::vector<RayIndex> boundary;
    for (const auto& l : blowup_point_boundary(n)) boundary.push_back(t.ray(l));
    Divisor big_l = Integer(-1) * k - ray_divisor(fan, boundary);
    for (const auto& w : walls(fan)) {
      bool in_e = std::binary_search(w.rays.begin(), w.rays.end(), e);
      bool fiber = true;
      for (auto r : w.rays) fiber = fiber && t.labels[static_cast<std::size_t>(r)].stage == 1;
      if (fiber) {
        CHECK(intersection_number(k, w) == -2);
        CHECK(intersection_number(big_l, w) == 1);
      }
      if (in_e) {
        CHECK(intersection_number(k, w) == -(n - 1));
        CHECK(intersection_number(big_l, w) == 1);
      }
    }
    NefValue nv = nef_value(fan, big_l);
    CHECK(nv.tau == Rational(std::max(2, n - 1)));
  }
}

TEST_CASE("intersection numbers depend only on the class") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 2, trial % 2);
    auto ws = walls(f);
    Divisor d = random_divisor(rng, f, 3);
    for (int rep = 0; rep < 10; ++rep) {
      IntVector m = random_character(rng, f.rank, 5);
      Divisor moved = d + principal_divisor(f, m);
      CHECK(divisor_class(f, moved) == divisor_class(f, d));
      for (const auto& w : ws) {
        CHECK(intersection_number(moved, w) == intersection_number(d, w));
        CHECK(intersection_number(principal_divisor(f, m), w) == 0);
      }
    }
  }
}

TEST_CASE("class coordinates separate classes") {
  Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 2, trial % 2);
    Divisor a = random_divisor(rng, f, 2);
    Divisor b = random_divisor(rng, f, 2);
    bool same_class = divisor_class(f, a) == divisor_class(f, b);
    // Oracle: a - b is principal iff the integer system <m, v_r> = a_r - b_r is solvable.
    IntMatrix rays(f.ray_count(), f.rank);
    for (RayIndex r = 0; r < f.ray_count(); ++r) rays.row(r) = f.rays[static_cast<std::size_t>(r)].transpose();
    auto m = solve(to_rational(rays), to_rational(IntVector(a.coeffs - b.coeffs)));
    CHECK(same_class == m.has_value());
    bool same_numbers = true;
    for (const auto& w : walls(f)) same_numbers = same_numbers && intersection_number(a, w) == intersection_number(b, w);
    CHECK(same_class == same_numbers);
  }
}

TEST_CASE("positivity agrees with the support function oracle") {
  Rng rng(31);
  int ample = 0, nef = 0, other = 0;
  for (int trial = 0; trial < 150; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 2, trial % 3 == 0 ? 1 : 0);
    Divisor d = random_divisor(rng, f, 2);
    if (trial % 5 == 0) d = Integer(-1) * canonical_divisor(f);
    if (trial % 7 == 0) d = zero_divisor(f);
    Positivity p = positivity(f, d);
    CHECK(p == positivity_oracle(f, d));
    QDivisor q = to_rational(d);
    CHECK(positivity(f, q) == p);
    (p == Positivity::ample ? ample : p == Positivity::nef_not_ample ? nef : other)++;
  }
  CHECK(ample > 0);
  CHECK(nef > 0);
  CHECK(other > 0);
  Fan p2 = projective_space_fan(2);
  CHECK(positivity(p2, zero_divisor(p2)) == Positivity::nef_not_ample);
  CHECK(std::string(to_string(Positivity::ample)) == "ample");
}

TEST_CASE("Hirzebruch positivity for the section choices") {
  for (int l = 1; l <= 4; ++l) {
    TowerFan t = build_fan(hirzebruch_spec(l));
    Divisor k = canonical_divisor(t.fan);
    Divisor good = Integer(-1) * k - ray_divisor(t.fan, {t.ray(2, 1), t.ray(1, 1)});
    Divisor bad = Integer(-1) * k - ray_divisor(t.fan, {t.ray(2, 0), t.ray(1, 1)});
    CHECK(positivity(t.fan, good) == Positivity::ample);
    CHECK(positivity(t.fan, bad) != Positivity::ample);
    auto failing = non_positive_walls(walls(t.fan), bad);
    REQUIRE(failing.size() == 1);
    CHECK(walls(t.fan)[static_cast<std::size_t>(failing[0])].rays == Cone{t.ray(2, 1)});
    CHECK(nef_value(t.fan, good).tau == Rational(2));
  }
}

TEST_CASE("nef value of P^2 with two lines") {
  Fan p2 = projective_space_fan(2);
  Divisor big_l = Integer(-1) * canonical_divisor(p2) - ray_divisor(p2, {0, 1});
  NefValue nv = nef_value(p2, big_l);
  CHECK(nv.tau == Rational(3));
  CHECK(nv.trivial_walls.size() == 3);
  CHECK_THROWS_AS(nef_value(p2, zero_divisor(p2)), std::invalid_argument);
}

TEST_CASE("nef value is the threshold") {
  Rng rng(37);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 2 + trial % 3, 2, trial % 2);
    Divisor l = random_divisor(rng, f, 3);
    if (trial % 2 == 0) l = Integer(-1) * canonical_divisor(f) + l;
    if (positivity(f, l) != Positivity::ample) continue;
    NefValue nv = nef_value(f, l);
    QDivisor k = to_rational(canonical_divisor(f));
    QDivisor ql = to_rational(l);
    CHECK(positivity(f, k + nv.tau * ql) == Positivity::nef_not_ample);
    CHECK(positivity(f, k + (nv.tau - Rational(1, 1000)) * ql) == Positivity::not_nef);
    for (const auto& w : nv.trivial_walls) CHECK(intersection_number(k + nv.tau * ql, w) == Rational(0));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("restriction examples") {
  TowerFan f2 = build_fan(hirzebruch_spec(3));
  RayIndex s = f2.ray(2, 1);
  auto self = restrict_to_stratum(f2.fan, ray_divisor(f2.fan, {s}), {s});
  CHECK(self.star.fan.rank == 1);
  CHECK(self.divisor.coeffs.sum() == -3);

  Fan p2 = projective_space_fan(2);
  auto line = restrict_to_stratum(p2, ray_divisor(p2, {0}), {1});
  CHECK(line.divisor.coeffs.sum() == 1);

  TowerFan p1p1 = build_fan(hirzebruch_spec(0));
  Divisor fiber = ray_divisor(p1p1.fan, {p1p1.ray(1, 1)});
  CHECK(restrict_to_stratum(p1p1.fan, fiber, {p1p1.ray(2, 1)}).divisor.coeffs.sum() == 1);
  CHECK(restrict_to_stratum(p1p1.fan, fiber, {p1p1.ray(1, 0)}).divisor.coeffs.sum() == 0);
  CHECK_THROWS_AS(restrict_to_stratum(p2, ray_divisor(p2, {0}), {0, 1, 2}), std::invalid_argument);
}

TEST_CASE("restriction is compatible with walls") {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 2 + trial % 3, 2, trial % 2);
    Divisor d = random_divisor(rng, f, 3);
    Cone tau = bott::testing::random_face(rng, f, 1);
    if (static_cast<int>(tau.size()) >= f.rank - 0) tau.pop_back();
    auto res = restrict_to_stratum(f, d, tau);
    auto ambient_walls = walls(f);
    for (const auto& sw : walls(res.star.fan)) {
      Cone lifted = tau;
      for (auto r : sw.rays) lifted.push_back(res.star.ambient_ray[static_cast<std::size_t>(r)]);
      const Wall& aw = wall_with_rays(ambient_walls, lifted);
      CHECK(intersection_number(res.divisor, sw) == intersection_number(d, aw));
    }
  }
}
