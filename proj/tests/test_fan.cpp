#include "bott/fan.hpp"
#include "bott/linalg.hpp"
#include "bott/tower.hpp"
#include "generators.hpp"

#include "doctest.h"

using namespace bott;
using bott::testing::Rng;

namespace {

Fan fan_from(int rank, std::vector<std::vector<std::int64_t>> rays, std::vector<Cone> cones) {
  Fan f;
  f.rank = rank;
  for (const auto& r : rays) {
    LatticeVector v(rank);
    for (int i = 0; i < rank; ++i) v[i] = r[static_cast<std::size_t>(i)];
    f.rays.push_back(v);
  }
  for (auto& c : cones) f.max_cones.push_back(make_cone(c));
  return f;
}

Fan p2() { return projective_space_fan(2); }

}  // namespace

TEST_CASE("standard fans validate") {
  for (int n = 1; n <= 4; ++n) {
    Fan f = projective_space_fan(n);
    CHECK(f.ray_count() == n + 1);
    CHECK(f.max_cones.size() == static_cast<std::size_t>(n + 1));
    CHECK(validate_fan(f).ok());
  }
  Fan pp = product_fan(projective_space_fan(1), projective_space_fan(2));
  CHECK(pp.rank == 3);
  CHECK(pp.max_cones.size() == 6);
  CHECK(validate_fan(pp).ok());
  Fan point = projective_space_fan(0);
  CHECK(point.rank == 0);
  CHECK(point.max_cones.size() == 1);
}

TEST_CASE("validation rejects malformed fans") {
  SUBCASE("non-primitive ray") {
    Fan f = fan_from(1, {{2}, {-1}}, {{0}, {1}});
    CHECK_FALSE(validate_fan(f).ok());
  }
  SUBCASE("singular cone") {
    Fan f = fan_from(2, {{1, 0}, {1, 2}, {-1, -1}, {0, 1}}, {{0, 1}, {1, 3}, {3, 2}, {2, 0}});
    CHECK_FALSE(validate_fan(f).ok());
  }
  SUBCASE("incomplete fan") {
    Fan f = p2();
    f.max_cones.pop_back();
    CHECK_FALSE(validate_fan(f).ok());
  }
  SUBCASE("overlapping cones") {
    // Cones of P^2 plus an overlapping cone <e1, -e2> through an extra ray.
    Fan f = fan_from(2, {{1, 0}, {0, 1}, {-1, -1}, {0, -1}}, {{0, 1}, {1, 2}, {2, 0}, {0, 3}});
    CHECK_FALSE(validate_fan(f).ok());
  }
  SUBCASE("duplicate ray") {
    Fan f = p2();
    f.rays.push_back(f.rays[0]);
    CHECK_FALSE(validate_fan(f).ok());
  }
}

TEST_CASE("walls of a complete smooth fan have two cones") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 2, trial % 3);
    for (const auto& w : wall_incidences(f)) CHECK(w.cones.size() == 2);
  }
}

TEST_CASE("star fans") {
  Fan f1 = build_fan(hirzebruch_spec(1)).fan;
  for (RayIndex r = 0; r < f1.ray_count(); ++r) {
    StarFan s = star_fan(f1, {r});
    CHECK(s.fan.rank == 1);
    CHECK(s.fan.ray_count() == 2);
    CHECK(validate_fan(s.fan).ok());
    CHECK(s.ambient_ray.size() == 2);
  }
  StarFan whole = star_fan(f1, {});
  CHECK(whole.fan.rank == 2);
  CHECK(fan_isomorphic(whole.fan, f1).has_value());
  StarFan pt = star_fan(f1, f1.max_cones[0]);
  CHECK(pt.fan.rank == 0);
  CHECK_THROWS_AS(star_fan(f1, {0, 1, 2}), std::invalid_argument);

  // A ray adjacent to tau maps to a star ray; one not adjacent does not.
  Fan p3 = projective_space_fan(3);
  StarFan s = star_fan(p3, {0});
  CHECK(s.star_ray(0) == -1);
  CHECK(s.star_ray(1) >= 0);
}

TEST_CASE("blowing up a point of P^2 gives F_1") {
  Fan blown = star_subdivision(p2(), p2().max_cones[0]);
  CHECK(blown.ray_count() == 4);
  CHECK(validate_fan(blown).ok());
  CHECK(fan_isomorphic(blown, build_fan(hirzebruch_spec(1)).fan).has_value());
  CHECK_FALSE(fan_isomorphic(blown, build_fan(hirzebruch_spec(0)).fan).has_value());
  CHECK_THROWS_AS(star_subdivision(p2(), {0}), std::invalid_argument);
}

TEST_CASE("Hirzebruch surfaces are distinguished by |l|") {
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      bool iso = fan_isomorphic(build_fan(hirzebruch_spec(a)).fan, build_fan(hirzebruch_spec(b)).fan).has_value();
      CHECK(iso == (std::abs(a) == std::abs(b)));
    }
  }
}

TEST_CASE("star subdivision invariants on random fans") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 3;
    Fan f = bott::testing::random_blown_up_fan(rng, n, 2, trial % 2);
    Cone tau = bott::testing::random_face(rng, f);
    Fan g = star_subdivision(f, tau);
    CHECK(g.ray_count() == f.ray_count() + 1);
    std::size_t containing = f.cones_containing(tau).size();
    CHECK(g.max_cones.size() == f.max_cones.size() + containing * (tau.size() - 1));
    LatticeVector sum = LatticeVector::Zero(n);
    for (auto r : tau) sum += f.rays[static_cast<std::size_t>(r)];
    CHECK(g.rays.back() == sum);
    CHECK(validate_fan(g).ok());
    CHECK_FALSE(g.is_cone(tau));
  }
}

TEST_CASE("isomorphism search recovers scrambled fans") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 2, trial % 2);
    Fan g = bott::testing::scrambled(rng, f);
    auto iso = fan_isomorphic(f, g);
    REQUIRE(iso.has_value());
    CHECK(verify_isomorphism(f, g, *iso));
    auto back = fan_isomorphic(g, f);
    REQUIRE(back.has_value());
    CHECK(verify_isomorphism(g, f, *back));
  }
}

TEST_CASE("colored isomorphisms respect colors") {
  Fan f = build_fan(hirzebruch_spec(0)).fan;
  std::vector<int> none(4, 0);
  CHECK(fan_isomorphisms(f, f, none, none).size() == 8);
  std::vector<int> one = {1, 0, 0, 0};
  auto isos = fan_isomorphisms(f, f, one, one);
  CHECK(isos.size() == 2);
  for (const auto& iso : isos) CHECK(iso.ray_map[0] == 0);
  std::vector<int> two = {2, 0, 0, 0};
  CHECK(fan_isomorphisms(f, f, one, two).empty());
}

TEST_CASE("canonical text format round trips") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    Fan f = bott::testing::random_blown_up_fan(rng, 1 + trial % 4, 3, trial % 3);
    std::string text = write_fan(f);
    Fan back = read_fan(text);
    CHECK(back == canonical_fan(f));
    CHECK(write_fan(back) == text);
  }
  CHECK_THROWS_AS(read_fan("rank 2\nrays 1\n1 0 0\ncones 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_fan("rank 1\nrays 2\n1\n-1\ncones 2\n0\n5\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_fan("rank 1\nrays 2\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_fan("dimension 1\n"), std::invalid_argument);
}
