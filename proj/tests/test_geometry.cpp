#include <catch2/catch_amalgamated.hpp>

#include "szego/domain_io.hpp"
#include "szego/geometry.hpp"

#include "oracles.hpp"

using namespace szego;
using namespace szego::geometry;

TEST_CASE("unit circle quadrature sums to the circumference") {
  Domain disc = builtin_domain("disc");
  BoundaryGrid g = sample_boundary(disc, 64);
  double total = 0.0;
  for (double w : g.weights) total += w;
  CHECK(std::abs(total - two_pi) < 1e-12);
}

TEST_CASE("unit circle tangent at t = 0 is i") {
  Domain disc = builtin_domain("disc");
  BoundaryGrid g = sample_boundary(disc, 64);
  CHECK(std::abs(g.tangents[0] - cx(0.0, 1.0)) < 1e-14);
}

TEST_CASE("tangents are unit modulus to machine precision") {
  for (const char* name : {"disc", "ellipse", "annulus", "three_connected"}) {
    Domain dom = builtin_domain(name);
    BoundaryGrid g = sample_boundary(dom, 64);
    double worst = 0.0;
    for (cx t : g.tangents) worst = std::max(worst, std::abs(std::abs(t) - 1.0));
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("ellipse arc length matches a refined-quadrature reference") {
  Domain e = builtin_domain("ellipse", {0.6});
  BoundaryGrid g = sample_boundary(e, 256);
  double total = 0.0;
  for (double w : g.weights) total += w;
  double reference = oracle::refined_arc_length(e.outer(), 4096);
  CHECK(std::abs(total - reference) < 1e-10);
}

TEST_CASE("doubling the node count barely moves the total length") {
  for (const char* name : {"disc", "ellipse", "annulus", "three_connected"}) {
    Domain dom = builtin_domain(name);
    auto sum = [&](int m) {
      BoundaryGrid g = sample_boundary(dom, m);
      double t = 0.0;
      for (double w : g.weights) t += w;
      return t;
    };
    CHECK(std::abs(sum(128) - sum(256)) < 1e-10);
  }
}

TEST_CASE("membership on the catalog domains") {
  Domain disc = builtin_domain("disc");
  CHECK(contains(disc, cx(0.0, 0.0)));
  CHECK_FALSE(contains(disc, cx(1.5, 0.0)));

  Domain ann = builtin_domain("annulus", {0.3});
  CHECK_FALSE(contains(ann, cx(0.0, 0.0)));  // inside the hole
  CHECK(contains(ann, cx(0.6, 0.0)));

  Domain three = builtin_domain("three_connected", {0.2, 0.5});
  CHECK(three.connectivity() == 3);
  CHECK(contains(three, cx(0.0, 0.0)));
  CHECK(contains(three, cx(0.0, 0.5)));
  CHECK(contains(three, cx(0.0, -0.5)));
  CHECK_FALSE(contains(three, cx(0.5, 0.0)));
  CHECK_FALSE(contains(three, cx(-0.5, 0.0)));
}

TEST_CASE("membership agrees with the ray-casting oracle on a grid") {
  Domain three = builtin_domain("three_connected", {0.2, 0.5});
  int checked = 0;
  for (double x = -1.3; x <= 1.3; x += 0.13) {
    for (double y = -1.3; y <= 1.3; y += 0.13) {
      cx p(x, y);
      if (three.boundary_distance(p) < 0.03) continue;  // oracle-safe margin
      CHECK(contains(three, p) == oracle::ray_contains(three, p));
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("winding of the oriented boundary: 1 inside, 0 at anchors") {
  Domain three = builtin_domain("three_connected", {0.2, 0.5});
  BoundaryGrid g = sample_boundary(three, 64);
  auto winding = [&](cx p) {
    cx acc = 0.0;
    for (int i = 0; i < g.size(); ++i) acc += g.dz[i] / (g.nodes[i] - p);
    return std::lround(std::imag(acc) / two_pi);
  };
  CHECK(winding(cx(0.0, 0.4)) == 1);
  for (cx anchor : three.hole_anchors()) CHECK(winding(anchor) == 0);
}

TEST_CASE("catalog parameters are validated") {
  CHECK_THROWS_AS(builtin_domain("annulus", {1.4}), Error);
  CHECK_THROWS_AS(builtin_domain("nosuch"), Error);
  CHECK_THROWS_AS(builtin_domain("three_connected", {0.5, 0.2}), Error);
}

TEST_CASE("sampling preconditions") {
  Domain disc = builtin_domain("disc");
  CHECK_THROWS_AS(sample_boundary(disc, 8), Error);
  CHECK_THROWS_AS(sample_boundary(disc, 17), Error);
}

TEST_CASE("degenerate curve is rejected") {
  // z(t) = e^{it} + e^{-it} = 2 cos t traces a segment; z' vanishes
  CHECK_THROWS_AS(Domain(geometry::Curve({cx(1, 0), cx(0, 0), cx(1, 0)}, -1), {}, {}),
                  Error);
}

TEST_CASE("domain-spec files round through JSON with validation") {
  nlohmann::json j = {
      {"outer", {{"fourier", {{0.0, 0.0}, {1.0, 0.0}}}, {"kmin", 0}}},
      {"holes",
       {{{"fourier", {{0.0, 0.0}, {0.3, 0.0}}}, {"kmin", 0}, {"anchor", {0.0, 0.0}}}}}};
  Domain ann = domain_from_json(j);
  CHECK(ann.connectivity() == 2);
  CHECK(contains(ann, cx(0.6, 0.0)));
  CHECK_FALSE(contains(ann, cx(0.0, 0.1)));

  // clockwise hole in the file is invalid
  nlohmann::json bad = j;
  bad["holes"][0]["fourier"] = {{0.0, 0.0}, {0.3, 0.0}};
  bad["holes"][0]["kmin"] = -1;
  // coefficient at k=-1 only: z(t) = 0.3 e^{-it}, clockwise
  bad["holes"][0]["fourier"] = {{0.3, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(domain_from_json(bad), Error);

  // anchor outside its hole
  nlohmann::json bad2 = j;
  bad2["holes"][0]["anchor"] = {0.7, 0.0};
  CHECK_THROWS_AS(domain_from_json(bad2), Error);
}

TEST_CASE("proximity errors near the boundary") {
  Domain disc = builtin_domain("disc");
  CHECK_THROWS_AS(contains(disc, cx(1.0 + 1e-12, 0.0)), Error);
}
