#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "szego/suites.hpp"
#include "szego/szego.hpp"

#include "oracles.hpp"

using namespace szego;
using namespace szego::geometry;
using namespace szego::hardy;
using namespace szego::verify;

namespace {

struct Setup {
  Domain domain;
  BoundaryGrid grid;
  HardyBasis basis;
  Setup(const char* name, int m, int order, std::vector<double> params = {})
      : domain(builtin_domain(name, params)),
        grid(sample_boundary(domain, m)),
        basis(domain, grid, Weight::unit(grid), order) {}
};

}  // namespace

TEST_CASE("I31 on closed-form disc oracles is near machine precision") {
  Setup s("disc", 256, 32);
  cx a(0.35, 0.2);
  BoundaryFunction S, L;
  S.samples.resize(s.grid.size());
  L.samples.resize(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) {
    S.samples[i] = oracle::disc_szego(s.grid.nodes[i], a);
    L.samples[i] = oracle::disc_garabedian(s.grid.nodes[i], a);
  }
  auto rep = check_I31(s.grid, S, L, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-12);

  // negative control: flipped sign must fail loudly
  for (auto& v : L.samples) v = -v;
  auto bad = check_I31(s.grid, S, L, 1e-9);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual > 1e3 * 1e-9);
}

TEST_CASE("I34 negative control: conjugate-doubled sign error is O(1)") {
  Setup s("annulus", 256, 32, {0.3});
  potential::DirichletSolver solver(s.domain, s.grid, 32);
  auto g = potential::green(solver, cx(0.55, 0.1));
  auto rep = check_I34(s.grid, g);
  CHECK(rep.pass);
  double flipped = 0.0;
  for (int i = 0; i < s.grid.size(); ++i) {
    cx v = g.dz(s.grid.nodes[i]) * s.grid.tangents[i];
    flipped = std::max(flipped, std::abs(v - std::conj(v)));
  }
  CHECK(flipped > 1e3 * rep.tolerance);
}

TEST_CASE("class witnesses on the annulus") {
  Setup s("annulus", 256, 40, {0.3});
  cx a(0.55, 0.1);
  auto S = classical::szego_kernel(s.basis, a);
  auto L = classical::garabedian_kernel(s.basis, a);
  BoundaryFunction h;
  h.samples.resize(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) h.samples[i] = -cx(0, 1) * L.samples[i];
  auto repB = class_membership_witness(MembershipClass::B, s.grid, S, h, 1e-7);
  CHECK(repB.pass);

  potential::DirichletSolver solver(s.domain, s.grid, 32);
  auto hm = potential::harmonic_measure(solver, 2);
  BoundaryFunction fp, fpn;
  fp.samples.resize(s.grid.size());
  fpn.samples.resize(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) {
    fp.samples[i] = hm.f_prime(s.grid.nodes[i]);
    fpn.samples[i] = -fp.samples[i];
  }
  auto repA = class_membership_witness(MembershipClass::A, s.grid, fp, fpn, 1e-6);
  CHECK(repA.pass);
}

TEST_CASE("quotient extension corollary: S-ratio equals conj(L-ratio)") {
  Setup s("annulus", 256, 40, {0.3});
  cx a1(0.55, 0.1), a2(-0.6, 0.05);
  auto S1 = classical::szego_kernel(s.basis, a1);
  auto S2 = classical::szego_kernel(s.basis, a2);
  auto L1 = classical::garabedian_kernel(s.basis, a1);
  auto L2 = classical::garabedian_kernel(s.basis, a2);
  double worst = 0.0;
  for (int i = 0; i < s.grid.size(); ++i) {
    cx lhs = S1.samples[i] / S2.samples[i];
    cx rhs = std::conj(L1.samples[i] / L2.samples[i]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("Poisson-weight checks on the annulus") {
  Setup s("annulus", 256, 40, {0.3});
  potential::DirichletSolver solver(s.domain, s.grid, 40);
  cx a0(0.55, 0.0);
  auto pw = potential::poisson_weight(solver, a0);
  HardyBasis pbasis(s.domain, s.grid, pw, 40);

  auto rep = check_sigma_const(pbasis, a0, 1e-6);
  CHECK(rep.pass);

  auto rep101 = check_I101(pbasis, solver, a0, 1e-5);
  CHECK(rep101.pass);

  CHECK(poisson_lambda_zero_count(s.domain, pbasis, a0) == 1);

  auto q = quotient_nonconstant(pbasis, a0, cx(0.6, 0.0));
  CHECK(q.nonconstant);

  // degenerate control: A1 = A0 has residual zero
  auto q0 = quotient_nonconstant(pbasis, a0, a0);
  CHECK(q0.relative_residual < 1e-10);
  CHECK_FALSE(q0.nonconstant);
}

TEST_CASE("sigma_const on the disc at the origin is near exact") {
  Setup s("disc", 256, 32);
  potential::DirichletSolver solver(s.domain, s.grid, 32);
  auto pw = potential::poisson_weight(solver, cx(0.0, 0.0));
  HardyBasis pbasis(s.domain, s.grid, pw, 32);
  auto rep = check_sigma_const(pbasis, cx(0.0, 0.0), 1e-9);
  CHECK(rep.pass);
}

TEST_CASE("dependence detector: f = z has the relation f' - 1 at degree 1") {
  Setup s("disc", 256, 24);
  auto pts = suites::pick_interior_points(s.domain, 60, 0.06, 0.015);
  auto fresh = suites::pick_interior_points(s.domain, 60, 0.055, 0.017);
  std::vector<cx> f, fp, ff, ffp;
  auto m = classical::ahlfors(s.domain, s.basis, cx(0.0, 0.0));
  for (cx z : pts) {
    f.push_back(cauchy_interior_eval(s.grid, m.boundary, z));
    fp.push_back(cauchy_interior_derivative(s.grid, m.boundary, z, 1));
  }
  for (cx z : fresh) {
    ff.push_back(cauchy_interior_eval(s.grid, m.boundary, z));
    ffp.push_back(cauchy_interior_derivative(s.grid, m.boundary, z, 1));
  }
  auto rep = algebraic_dependence(f, fp, 1, ff, ffp);
  CHECK(rep.dependent);
  CHECK(rep.min_singular <= 1e-12);
  CHECK(rep.fresh_residual <= 1e-8);
  // the relation is f' - 1: constant and f' carry the weight, f does not
  REQUIRE(rep.monomials.size() == 3);
  double c_const = std::abs(rep.relation[0]);  // (0,0)
  double c_f = std::abs(rep.relation[1]);      // f'^1? ordering: (1,0) then (0,1)
  double c_fp = 0.0;
  for (std::size_t k = 0; k < rep.monomials.size(); ++k) {
    if (rep.monomials[k] == std::pair<int, int>(1, 0)) c_fp = std::abs(rep.relation[k]);
    if (rep.monomials[k] == std::pair<int, int>(0, 1)) c_f = std::abs(rep.relation[k]);
  }
  CHECK(c_const > 0.1);
  CHECK(c_fp > 0.1);
  CHECK(c_f < 1e-6);
}

TEST_CASE("dependence detector: disc automorphism found at degree <= 3") {
  Setup s("disc", 256, 32);
  auto pts = suites::pick_interior_points(s.domain, 60, 0.06, 0.015);
  auto fresh = suites::pick_interior_points(s.domain, 60, 0.055, 0.017);
  auto m = classical::ahlfors(s.domain, s.basis, cx(0.4, 0.0));
  std::vector<cx> f, fp, ff, ffp;
  for (cx z : pts) {
    f.push_back(cauchy_interior_eval(s.grid, m.boundary, z));
    fp.push_back(cauchy_interior_derivative(s.grid, m.boundary, z, 1));
  }
  for (cx z : fresh) {
    ff.push_back(cauchy_interior_eval(s.grid, m.boundary, z));
    ffp.push_back(cauchy_interior_derivative(s.grid, m.boundary, z, 1));
  }
  bool found = false;
  for (int d = 1; d <= 3 && !found; ++d) {
    auto rep = algebraic_dependence(f, fp, d, ff, ffp);
    if (rep.dependent) {
      found = true;
      CHECK(rep.fresh_residual <= 1e-8);
    }
  }
  CHECK(found);
}

TEST_CASE("dependence detector: annulus Ahlfors map has no low-degree relation") {
  Setup s("annulus", 256, 40, {0.3});
  auto pts = suites::pick_interior_points(s.domain, 60, 0.06, 0.015);
  auto m = classical::ahlfors(s.domain, s.basis, cx(0.55, 0.0));
  std::vector<cx> f, fp;
  for (cx z : pts) {
    f.push_back(cauchy_interior_eval(s.grid, m.boundary, z));
    fp.push_back(cauchy_interior_derivative(s.grid, m.boundary, z, 1));
  }
  auto rep = algebraic_dependence(f, fp, 4);
  CHECK_FALSE(rep.dependent);
  CHECK(rep.min_singular > 1e-8);
}

TEST_CASE("dependence detector preconditions") {
  std::vector<cx> f(10, cx(0.5, 0.0)), fp(10, cx(1.0, 0.0));
  CHECK_THROWS_AS(algebraic_dependence(f, fp, 3), Error);  // too few samples
  std::vector<cx> big(60, cx(2.0, 0.0)), bfp(60, cx(1.0, 0.0));
  CHECK_THROWS_AS(algebraic_dependence(big, bfp, 1), Error);  // outside the disc
}

TEST_CASE("(6.5): Bergman kernel decomposes over the Szego kernel") {
  SECTION("disc: K = 4 pi S^2 directly") {
    Setup s("disc", 256, 32);
    potential::DirichletSolver solver(s.domain, s.grid, 32);
    auto pts = suites::pick_interior_points(s.domain, 10);
    std::vector<cx> zs(pts.begin(), pts.begin() + 5), wsp(pts.begin() + 5, pts.end());
    auto fit = bergman_szego_decomposition(solver, s.basis, {}, zs, wsp);
    CHECK(fit.relative_residual < 1e-5);
  }
  SECTION("annulus: one F-term closes the gap") {
    Setup s("annulus", 256, 40, {0.3});
    potential::DirichletSolver solver(s.domain, s.grid, 40);
    std::vector<potential::HarmonicMeasure> ms;
    ms.push_back(potential::harmonic_measure(solver, 2));
    auto pts = suites::pick_interior_points(s.domain, 10);
    std::vector<cx> zs(pts.begin(), pts.begin() + 5), wsp(pts.begin() + 5, pts.end());
    auto fit = bergman_szego_decomposition(solver, s.basis, ms, zs, wsp);
    CHECK(fit.relative_residual < 1e-3);
    CHECK(fit.hermitian_defect < 1e-3);
    // without the F-term the residual is visible (negative control)
    auto bare = bergman_szego_decomposition(solver, s.basis, {}, zs, wsp);
    CHECK(bare.relative_residual > 1e-3);
  }
}

TEST_CASE("Green's derivative decomposes over sigma lambda and F'") {
  SECTION("disc, unit weight: no F-terms at all") {
    Setup s("disc", 256, 32);
    potential::DirichletSolver solver(s.domain, s.grid, 32);
    auto pts = suites::pick_interior_points(s.domain, 8);
    cx w = pts[0];
    std::vector<cx> zs(pts.begin() + 1, pts.end());
    auto fit = green_sigma_lambda_fit(solver, s.basis, {}, w, zs);
    CHECK(fit.relative_residual < 1e-6);
  }
  SECTION("annulus with a smooth weight") {
    Domain domain = builtin_domain("annulus", {0.3});
    BoundaryGrid grid = sample_boundary(domain, 256);
    Weight w;
    w.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i)
      w.samples[i] = 2.0 + 0.5 * std::cos(grid.params[i]);
    HardyBasis basis(domain, grid, w, 40);
    potential::DirichletSolver solver(domain, grid, 40);
    std::vector<potential::HarmonicMeasure> ms;
    ms.push_back(potential::harmonic_measure(solver, 2));
    auto pts = suites::pick_interior_points(domain, 9);
    cx base = pts[0];
    std::vector<cx> zs(pts.begin() + 1, pts.end());
    auto fit = green_sigma_lambda_fit(solver, basis, ms, base, zs);
    CHECK(fit.relative_residual < 1e-3);
  }
}

TEST_CASE("suite runners produce consistent CSV") {
  suites::Config cfg;
  cfg.domain_spec = "disc";
  cfg.basis_order = 32;
  auto ws = suites::build_workspace(cfg);
  auto rows = suites::run_suite("identities", ws, cfg);
  CHECK(rows.size() == 8);
  for (const auto& r : rows) CHECK(r.pass);

  std::ostringstream out;
  suites::write_report_csv(out, rows);
  std::string text = out.str();
  CHECK(text.find("check_id,domain,weight,max_residual,tolerance,pass") == 0);
  CHECK(text.find("I31,disc,unit,") != std::string::npos);
}

TEST_CASE("weight expression grammar") {
  auto f = weightexpr::parse("2+cos(t)");
  CHECK(std::abs(f(0.0) - 3.0) < 1e-15);
  CHECK(std::abs(f(std::numbers::pi) - 1.0) < 1e-15);
  auto g = weightexpr::parse("1.5 + 0.25*sin(3t)");
  CHECK(std::abs(g(0.5) - (1.5 + 0.25 * std::sin(1.5))) < 1e-15);
  CHECK_THROWS_AS(weightexpr::parse("2+cos(t"), Error);
  CHECK_THROWS_AS(weightexpr::parse("exp(t)"), Error);
}
