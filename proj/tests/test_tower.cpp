#include "bott/linalg.hpp"
#include "bott/tower.hpp"
#include "generators.hpp"

#include "doctest.h"

using namespace bott;
using bott::testing::Rng;

TEST_CASE("tower fans are smooth and complete") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 5;
    BottTowerSpec spec = bott::testing::random_spec(rng, n, 3);
    TowerFan t = build_fan(spec);
    CHECK(t.fan.rank == n);
    CHECK(t.fan.ray_count() == n + spec.stages());
    std::size_t cones = 1;
    for (int d : spec.dims) cones *= static_cast<std::size_t>(d + 1);
    CHECK(t.fan.max_cones.size() == cones);
    CHECK(validate_fan(t.fan).ok());
  }
}

TEST_CASE("ray labels") {
  BottTowerSpec spec = product_spec({2, 1});
  TowerFan t = build_fan(spec);
  CHECK(t.ray(1, 0) == 0);
  CHECK(t.ray(1, 2) == 2);
  CHECK(t.ray(2, 1) == 4);
  CHECK_THROWS_AS((void)t.ray(3, 0), std::invalid_argument);
  CHECK(to_string(RayLabel{2, 1}) == "2:1");
  CHECK(parse_ray_label("3:0") == RayLabel{3, 0});
  CHECK_THROWS_AS(parse_ray_label("3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ray_label("3:x"), std::invalid_argument);
}

TEST_CASE("Hirzebruch rays") {
  TowerFan t = build_fan(hirzebruch_spec(3));
  CHECK(t.fan.rays[static_cast<std::size_t>(t.ray(1, 0))] == make_vector({-1, 3}));
  CHECK(t.fan.rays[static_cast<std::size_t>(t.ray(2, 0))] == make_vector({0, -1}));
}

TEST_CASE("stage projections are toric morphisms") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    BottTowerSpec spec = bott::testing::random_spec(rng, 1 + trial % 5, 2);
    for (int i = 1; i <= spec.stages(); ++i) {
      StageProjection p = stage_projection(spec, i);
      CHECK(p.target.stages() == i - 1);
      CHECK(p.map.matrix.rows() == p.target.dimension());
    }
  }
  CHECK_THROWS_AS(stage_projection(product_spec({1}), 2), std::invalid_argument);
}

TEST_CASE("blow-up of a point as a tower") {
  for (int n = 2; n <= 5; ++n) {
    Fan tower = build_fan(blowup_point_spec(n)).fan;
    Fan pn = projective_space_fan(n);
    Fan blown = star_subdivision(pn, pn.max_cones[0]);
    CHECK(fan_isomorphic(tower, blown).has_value());
    auto boundary = blowup_point_boundary(n);
    CHECK(boundary.size() == static_cast<std::size_t>(n));
    TowerFan t = build_fan(blowup_point_spec(n));
    Cone c;
    for (const auto& l : boundary) c.push_back(t.ray(l));
    CHECK(t.fan.cones_containing(make_cone(c)).size() == 1);
  }
  CHECK(build_fan(blowup_point_spec(3)).fan.ray_count() == 5);
  CHECK_THROWS_AS(blowup_point_spec(1), std::invalid_argument);
}

TEST_CASE("flag blow-up") {
  for (int n = 1; n <= 5; ++n) {
    Fan f = blowup_flag_fan(n);
    CHECK(f.ray_count() == 2 * n);
    CHECK(validate_fan(f).ok());
  }
  CHECK(fan_isomorphic(blowup_flag_fan(2), build_fan(hirzebruch_spec(1)).fan).has_value());
}

TEST_CASE("spec JSON") {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    BottTowerSpec spec = bott::testing::random_spec(rng, 1 + trial % 5, 4);
    CHECK(spec_from_json(spec_to_json(spec)) == spec);
  }
  CHECK(spec_to_json(hirzebruch_spec(2)) == R"({"dims":[1,1],"twists":[[[2]]]})");
  CHECK_THROWS_AS(spec_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(R"({"dims":[1,1],"twists":[]})"), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(R"({"dims":[1,1],"twists":[[[1,2]]]})"), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(R"({"dims":[1,0],"twists":[[]]})"), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(R"({"dims":[],"twists":[]})"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(spec_from_json(R"({"dims":[1,2],"twists":[[[1],[1,1]]]})"),
                       doctest::Contains("stage 2 slot 2"), std::invalid_argument);
}
