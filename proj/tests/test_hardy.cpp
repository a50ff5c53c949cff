#include <catch2/catch_amalgamated.hpp>

#include "szego/geometry.hpp"
#include "szego/hardy.hpp"

#include "oracles.hpp"

using namespace szego;
using namespace szego::geometry;
using namespace szego::hardy;

namespace {

struct Setup {
  Domain domain;
  BoundaryGrid grid;
  Weight weight;
  HardyBasis basis;

  Setup(const char* name, int m, int order,
        std::function<double(double)> wfun = {})
      : domain(builtin_domain(name)),
        grid(sample_boundary(domain, m)),
        weight(make_weight(grid, wfun)),
        basis(domain, grid, weight, order) {}

  static Weight make_weight(const BoundaryGrid& g, std::function<double(double)> f) {
    if (!f) return Weight::unit(g);
    Weight w;
    w.description = "custom";
    w.samples.resize(g.size());
    for (int i = 0; i < g.size(); ++i) w.samples[i] = f(g.params[i]);
    return w;
  }

  BoundaryFunction sampled(std::function<cx(cx)> f) const {
    BoundaryFunction u;
    u.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) u.samples[i] = f(grid.nodes[i]);
    return u;
  }
};

double max_abs_diff(const std::vector<cx>& a, const std::vector<cx>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("weighted_inner on the circle") {
  Setup s("disc", 128, 12);
  auto one = s.sampled([](cx) { return 1.0; });
  auto z = s.sampled([](cx w) { return w; });
  auto z2 = s.sampled([](cx w) { return w * w; });
  CHECK(std::abs(weighted_inner(s.grid, one, one, s.weight) - cx(two_pi, 0)) < 1e-12);
  CHECK(std::abs(weighted_inner(s.grid, z, one, s.weight)) < 1e-12);
  CHECK(std::abs(weighted_inner(s.grid, z2, z2, s.weight) - cx(two_pi, 0)) < 1e-12);
}

TEST_CASE("weighted_inner rejects grid mismatch") {
  Setup s("disc", 64, 8);
  BoundaryFunction small;
  small.samples.resize(10);
  auto one = s.sampled([](cx) { return 1.0; });
  CHECK_THROWS_AS(weighted_inner(s.grid, small, one, s.weight), Error);
}

TEST_CASE("disc basis with unit weight is the normalized monomial family") {
  Setup s("disc", 128, 12);
  CHECK(s.basis.size() == 13);
  double scale = std::sqrt(two_pi);
  for (int q = 0; q < s.basis.size(); ++q)
    for (int i = 0; i < s.grid.size(); i += 17) {
      cx expected = std::pow(s.grid.nodes[i], q) / scale;
      CHECK(std::abs(s.basis.ortho_vector(q)[i] - expected) < 1e-10);
    }
}

TEST_CASE("annulus Laurent modes are all retained") {
  Setup s("annulus", 256, 16);
  CHECK(s.basis.size() == 2 * 16 + 1);
  CHECK(s.basis.ortho().dropped.empty());
}

TEST_CASE("projection reproduces polynomials") {
  for (const char* name : {"disc", "annulus", "three_connected"}) {
    Setup s(name, 256, 24);
    auto u = s.sampled([](cx z) { return z * z * z; });
    auto pu = szego_project(u, s.basis);
    CHECK(max_abs_diff(u.samples, pu.samples) < 1e-9);
  }
}

TEST_CASE("projection annihilates conj(z) on the circle and is idempotent") {
  Setup s("disc", 256, 24);
  auto u = s.sampled([](cx z) { return std::conj(z); });
  auto pu = szego_project(u, s.basis);
  double worst = 0.0;
  for (cx v : pu.samples) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-9);

  auto mixed = s.sampled([](cx z) { return std::conj(z) * 0.7 + z * z + std::exp(z) * 0.1; });
  auto p1 = szego_project(mixed, s.basis);
  auto p2 = szego_project(p1, s.basis);
  CHECK(max_abs_diff(p1.samples, p2.samples) < 1e-10);
}

TEST_CASE("weighted Cauchy kernel reproduces h(a) for any weight") {
  cx a(0.3, 0.2);
  Setup unit("disc", 256, 24);
  auto h = unit.sampled([](cx z) { return z * z; });
  auto c = weighted_cauchy_kernel(unit.grid, a, unit.weight);
  CHECK(std::abs(weighted_inner(unit.grid, h, c, unit.weight) - a * a) < 1e-9);

  Setup wober("annulus", 256, 24,
              [](double t) { return 2.0 + std::cos(t); });
  auto h2 = wober.sampled([](cx z) { return z * z; });
  auto c2 = weighted_cauchy_kernel(wober.grid, cx(0.6, 0.0), wober.weight);
  CHECK(std::abs(weighted_inner(wober.grid, h2, c2, wober.weight) - cx(0.36, 0.0)) <
        1e-8);
}

TEST_CASE("sigma on the disc matches the Szego oracle") {
  Setup s("disc", 256, 32);
  cx a(0.4, 0.1);
  auto sig = sigma(s.basis, a);
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); ++i)
    worst = std::max(worst,
                     std::abs(sig.samples[i] - oracle::disc_szego(s.grid.nodes[i], a)));
  CHECK(worst < 1e-8);

  // interior values, both via Cauchy evaluation and the orthonormal expansion
  for (cx z : {cx(0.2, 0.3), cx(-0.5, 0.1), cx(0.0, 0.0)}) {
    CHECK(std::abs(cauchy_interior_eval(s.grid, sig, z) - oracle::disc_szego(z, a)) <
          1e-8);
    CHECK(std::abs(sigma_point(s.basis, z, a) - oracle::disc_szego(z, a)) < 1e-8);
  }
}

TEST_CASE("sigma reproduces Hardy functions under the weighted inner product") {
  Setup s("annulus", 256, 32, [](double t) { return 2.0 + std::cos(t); });
  cx a(0.55, 0.15);
  auto sig = sigma(s.basis, a);
  auto h = s.sampled([](cx z) { return z * z * z + 2.0 * z; });
  cx expect = a * a * a + 2.0 * a;
  CHECK(std::abs(weighted_inner(s.grid, h, sig, s.weight) - expect) < 1e-8);
}

TEST_CASE("sigma is Hermitian when evaluated both ways") {
  Setup s("annulus", 256, 32);
  cx z(0.6, 0.2), w(-0.5, 0.35);
  CHECK(std::abs(sigma_point(s.basis, z, w) - std::conj(sigma_point(s.basis, w, z))) <
        1e-12);
  auto sw = sigma(s.basis, w);
  auto sz = sigma(s.basis, z);
  cx via_w = cauchy_interior_eval(s.grid, sw, z);
  cx via_z = std::conj(cauchy_interior_eval(s.grid, sz, w));
  CHECK(std::abs(via_w - via_z) < 1e-8);
}

TEST_CASE("sigma_dbar matches the differentiated disc oracle") {
  Setup s("disc", 256, 32);
  cx a(0.3, -0.2);
  auto d1 = sigma_dbar(s.basis, a, 1);
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); ++i) {
    cx z = s.grid.nodes[i];
    cx expect = z / (two_pi * std::pow(1.0 - z * std::conj(a), 2));
    worst = std::max(worst, std::abs(d1.samples[i] - expect));
  }
  CHECK(worst < 1e-6);

  auto d0 = sigma_dbar(s.basis, a, 0);
  auto direct = sigma(s.basis, a);
  CHECK(max_abs_diff(d0.samples, direct.samples) == 0.0);
}

TEST_CASE("sigma_dbar second derivative on the disc") {
  Setup s("disc", 256, 32);
  cx a(0.25, 0.1);
  auto d2 = sigma_dbar(s.basis, a, 2);
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); i += 5) {
    cx z = s.grid.nodes[i];
    cx expect = 2.0 * z * z / (two_pi * std::pow(1.0 - z * std::conj(a), 3));
    worst = std::max(worst, std::abs(d2.samples[i] - expect));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("sigma is antiholomorphic in the base point") {
  Setup s("annulus", 256, 24);
  cx a(0.55, 0.0);
  double h = 1e-4;
  auto sp = sigma(s.basis, a + h), sm = sigma(s.basis, a - h);
  auto sip = sigma(s.basis, a + cx(0, h)), sim = sigma(s.basis, a - cx(0, h));
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); i += 7) {
    cx dxi = (sp.samples[i] - sm.samples[i]) / (2 * h);
    cx deta = (sip.samples[i] - sim.samples[i]) / (2 * h);
    cx dz_holo = 0.5 * (dxi - cx(0, 1) * deta);  // d/da, should vanish
    worst = std::max(worst, std::abs(dz_holo));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("derivative reproducing property") {
  Setup s("disc", 256, 32);
  cx a(0.3, 0.25);
  auto d1 = sigma_dbar(s.basis, a, 1);
  auto h = s.sampled([](cx z) { return z * z * z + 2.0 * z; });
  cx expect = 3.0 * a * a + 2.0;  // h'(a)
  CHECK(std::abs(weighted_inner(s.grid, h, d1, s.weight) - expect) < 1e-6);
}

TEST_CASE("weighted Garabedian kernel on the disc") {
  Setup s("disc", 256, 32);
  cx a(0.4, 0.0);
  auto parts = weighted_garabedian_parts(s.basis, a);
  CHECK(parts.hardy_residual < 1e-7);
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); ++i)
    worst = std::max(worst, std::abs(parts.lambda.samples[i] -
                                     oracle::disc_garabedian(s.grid.nodes[i], a)));
  CHECK(worst < 1e-8);

  // interior evaluation through the declared pole
  cx z(0.1, 0.55);
  CHECK(std::abs(cauchy_interior_eval(s.grid, parts.lambda, z) -
                 oracle::disc_garabedian(z, a)) < 1e-8);
}

TEST_CASE("identity (7.1) holds on the boundary") {
  Setup s("annulus", 256, 32, [](double t) { return 2.0 + 0.5 * std::cos(t); });
  cx a(0.6, 0.1);
  auto sig = sigma(s.basis, a);
  auto lam = weighted_garabedian(s.basis, a);
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); ++i) {
    cx lhs = std::conj(sig.samples[i]);
    cx rhs = lam.samples[i] * s.grid.tangents[i] /
             (cx(0, 1) * s.weight.samples[i]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("lambda residue at the base point") {
  Setup s("disc", 256, 32);
  cx a(0.3, 0.1);
  auto lam = weighted_garabedian(s.basis, a);
  // quadrature of lambda around a small circle about a picks out the residue
  cx acc = 0.0;
  const int n = 64;
  double r = 0.2;
  for (int k = 0; k < n; ++k) {
    cx zk = a + std::polar(r, two_pi * k / n);
    cx dz = std::polar(r, two_pi * k / n) * cx(0, 1) * (two_pi / n);
    acc += cauchy_interior_eval(s.grid, lam, zk) * dz;
  }
  cx residue = acc / cx(0, two_pi);
  CHECK(std::abs(residue - cx(1.0 / two_pi, 0.0)) < 1e-8);
}

TEST_CASE("cauchy_interior_eval basics and clearance") {
  Setup s("disc", 256, 24);
  auto f = s.sampled([](cx z) { return z * z; });
  cx z(0.3, 0.1);
  CHECK(std::abs(cauchy_interior_eval(s.grid, f, z) - z * z) < 1e-10);
  CHECK_THROWS_AS(cauchy_interior_eval(s.grid, f, cx(0.999, 0.0)), Error);
  CHECK_THROWS_AS(cauchy_interior_eval(s.grid, f, cx(1.4, 0.0)), Error);
}

TEST_CASE("basis quality error reports instead of returning garbage") {
  Domain disc = builtin_domain("disc");
  BoundaryGrid g = sample_boundary(disc, 16);
  // 16 nodes cannot resolve order 40: aliasing destroys the projection
  CHECK_THROWS_AS(HardyBasis(disc, g, Weight::unit(g), 40), Error);
}

TEST_CASE("reproducing property over an interior sample") {
  Setup s("three_connected", 256, 24);
  std::vector<std::function<cx(cx)>> hs = {
      [](cx) { return cx(1.0, 0.0); }, [](cx z) { return z; },
      [](cx z) { return z * z; }, [](cx z) { return z * z * z + 2.0 * z; }};
  std::vector<cx> hs_at;
  for (double x : {-0.2, 0.0, 0.2}) {
    for (double y : {-0.25, 0.0, 0.25}) {
      cx a(x, y);
      if (!s.domain.contains(a)) continue;
      auto sig = sigma(s.basis, a);
      for (auto& h : hs) {
        auto hb = s.sampled(h);
        CHECK(std::abs(weighted_inner(s.grid, hb, sig, s.weight) - h(a)) < 1e-8);
      }
    }
  }
}
