#pragma once

// Identity residual checks, class membership witnesses, the quotient
// non-constancy test, the algebraic-dependence detector, and the two
// least-squares decompositions that tie the Bergman side to the Szego side.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "szego/classical.hpp"
#include "szego/errors.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"
#include "szego/numerics.hpp"
#include "szego/potential.hpp"

namespace szego::verify {

using geometry::BoundaryGrid;
using geometry::Domain;
using hardy::BoundaryFunction;
using hardy::HardyBasis;
using hardy::Weight;

struct IdentityReport {
  std::string identity_id;
  double max_residual = 0.0;
  int node_of_max = -1;
  double tolerance = 0.0;
  bool pass = false;
};

inline double default_tolerance(const std::string& id) {
  if (id == "I31" || id == "I71" || id == "I72" || id == "SIGMA_CONST") return 1e-7;
  if (id == "I33") return 1e-4;
  return 1e-6;  // I34, I35, I61, I62, I101
}

namespace detail {

struct MaxTracker {
  double value = 0.0;
  int index = -1;
  void feed(double v, int i) {
    if (v > value) {
      value = v;
      index = i;
    }
  }
};

inline IdentityReport finish(std::string id, const MaxTracker& m, double tol) {
  return {std::move(id), m.value, m.index, tol, m.value <= tol};
}

}  // namespace detail

// (3.1): (1/i) L(z,a) T(z) = conj(S(z,a))
inline IdentityReport check_I31(const BoundaryGrid& grid, const BoundaryFunction& S,
                                const BoundaryFunction& L, double tol = 1e-7) {
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx lhs = L.samples[i] * grid.tangents[i] / cx(0.0, 1.0);
    m.feed(std::abs(lhs - std::conj(S.samples[i])), i);
  }
  return detail::finish("I31", m, tol);
}

// (3.4): dG/dz T is anti-real on the boundary
inline IdentityReport check_I34(const BoundaryGrid& grid,
                                const potential::GreenFunction& g, double tol = 1e-6) {
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx v = g.dz(grid.nodes[i]) * grid.tangents[i];
    m.feed(std::abs(v + std::conj(v)), i);
  }
  return detail::finish("I34", m, tol);
}

// (3.5): S(.,a1) S(.,a2) T = -conj(L(.,a1) L(.,a2) T)
inline IdentityReport check_I35(const BoundaryGrid& grid, const BoundaryFunction& S1,
                                const BoundaryFunction& S2, const BoundaryFunction& L1,
                                const BoundaryFunction& L2, double tol = 1e-6) {
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx t = grid.tangents[i];
    cx lhs = S1.samples[i] * S2.samples[i] * t;
    cx rhs = std::conj(L1.samples[i] * L2.samples[i] * t);
    m.feed(std::abs(lhs + rhs), i);
  }
  return detail::finish("I35", m, tol);
}

// (6.1) class-B witness: g = conj(h T);  (6.2) class-A witness: g T = conj(h T)
enum class MembershipClass { A, B };

inline IdentityReport class_membership_witness(MembershipClass kind,
                                               const BoundaryGrid& grid,
                                               const BoundaryFunction& g,
                                               const BoundaryFunction& h,
                                               double tol = 1e-6) {
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx t = grid.tangents[i];
    cx lhs = kind == MembershipClass::B ? g.samples[i] : g.samples[i] * t;
    m.feed(std::abs(lhs - std::conj(h.samples[i] * t)), i);
  }
  return detail::finish(kind == MembershipClass::B ? "I61" : "I62", m, tol);
}

// (7.1): conj(sigma) = lambda T / (i phi)
inline IdentityReport check_I71(const BoundaryGrid& grid, const Weight& w,
                                const BoundaryFunction& sig,
                                const BoundaryFunction& lam, double tol = 1e-7) {
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx rhs = lam.samples[i] * grid.tangents[i] / (cx(0.0, 1.0) * w.samples[i]);
    m.feed(std::abs(std::conj(sig.samples[i]) - rhs), i);
  }
  return detail::finish("I71", m, tol);
}

// (7.2) at n = 1: d/da conj(sigma(z,a)) = (1/(i phi)) [d lambda/da](z,a) T(z).
// The lambda derivative runs through a holomorphic Wirtinger stencil with
// one Richardson level; sigma_dbar supplies the left side.
inline IdentityReport check_I72(const HardyBasis& basis, cx a, double tol = 1e-7) {
  const BoundaryGrid& grid = basis.grid();
  const Weight& w = basis.weight();
  BoundaryFunction s1 = hardy::sigma_dbar(basis, a, 1);

  double h = 1e-3 * grid.distance(a);
  auto lam = [&](cx base) { return hardy::weighted_garabedian(basis, base).samples; };
  auto d_da = [&](double hh) {
    auto px = lam(a + hh), mx = lam(a - hh);
    auto py = lam(a + cx(0.0, hh)), my = lam(a - cx(0.0, hh));
    std::vector<cx> d(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      cx dxi = (px[i] - mx[i]) / (2.0 * hh);
      cx deta = (py[i] - my[i]) / (2.0 * hh);
      d[i] = 0.5 * (dxi - cx(0.0, 1.0) * deta);
    }
    return d;
  };
  auto coarse = d_da(h), fine = d_da(0.5 * h);
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx dl = (4.0 * fine[i] - coarse[i]) / 3.0;
    cx rhs = dl * grid.tangents[i] / (cx(0.0, 1.0) * w.samples[i]);
    m.feed(std::abs(std::conj(s1.samples[i]) - rhs), i);
  }
  return detail::finish("I72", m, tol);
}

// (3.3) at the boundary limit:  Lambda(w,z) T(z) + K(w,z) conj(T(z)) -> 0.
// The z slot of both kernels is closed-form on the closure, so the residual
// is taken at the boundary nodes themselves; the finite-difference error in
// the w slot sets the relaxed tolerance.  (A ring of interior points with
// extrapolation measures the same limit but pays an extrapolation error
// proportional to the kernel scale, which drowns the tolerance whenever the
// base point sits near a boundary curve.)
inline IdentityReport check_I33(const potential::DirichletSolver& solver, cx w,
                                double tol = 1e-4, int stride = 8) {
  const BoundaryGrid& grid = solver.grid();
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); i += stride) {
    // Lambda(w, z) = Lambda(z, w);  K(w, z) = conj(K(z, w))
    auto kl = potential::bergman_lambda_closure(solver, grid.nodes[i], w);
    cx r = kl.lambda * grid.tangents[i] +
           std::conj(kl.bergman) * std::conj(grid.tangents[i]);
    m.feed(std::abs(r), i);
  }
  return detail::finish("I33", m, tol);
}

// sigma(z, A0) = 1 for the Poisson weight at A0
inline IdentityReport check_sigma_const(const HardyBasis& poisson_basis, cx a0,
                                        double tol = 1e-7) {
  BoundaryFunction s = hardy::sigma(poisson_basis, a0);
  detail::MaxTracker m;
  for (int i = 0; i < poisson_basis.grid().size(); ++i)
    m.feed(std::abs(s.samples[i] - 1.0), i);
  return detail::finish("SIGMA_CONST", m, tol);
}

// (10.1) as a boundary identity:
//   lambda(z, A0) = (1/pi) dG/dzbar (z, A0) conj(T(z))^2   on b Omega,
// equivalently lambda T = i phi with the Poisson weight phi.
inline IdentityReport check_I101(const HardyBasis& poisson_basis,
                                 const potential::DirichletSolver& solver, cx a0,
                                 double tol = 1e-6) {
  const BoundaryGrid& grid = poisson_basis.grid();
  BoundaryFunction lam = hardy::weighted_garabedian(poisson_basis, a0);
  potential::GreenFunction g = potential::green(solver, a0);
  detail::MaxTracker m;
  for (int i = 0; i < grid.size(); ++i) {
    cx ct = std::conj(grid.tangents[i]);
    cx rhs = std::conj(g.dz(grid.nodes[i])) * ct * ct / std::numbers::pi;
    m.feed(std::abs(lam.samples[i] - rhs), i);
  }
  return detail::finish("I101", m, tol);
}

// lambda(., A0) has exactly n-1 zeros for the Poisson weight; counted by the
// argument principle after removing the pole at A0.
inline int poisson_lambda_zero_count(const Domain& domain,
                                     const HardyBasis& poisson_basis, cx a0) {
  const BoundaryGrid& grid = poisson_basis.grid();
  BoundaryFunction lam = hardy::weighted_garabedian(poisson_basis, a0);
  BoundaryFunction g;  // lambda * 2pi (z - A0): pole removed, zeros intact
  g.samples.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    g.samples[i] = lam.samples[i] * two_pi * (grid.nodes[i] - a0);
  classical::ZeroSearchOptions opt;
  opt.expected = domain.connectivity() - 1;
  opt.separation = 1e-4 * domain.diameter();
  auto zeros = classical::locate_interior_zeros(grid, g, opt);
  int total = 0;
  for (const auto& z : zeros) total += z.multiplicity;
  return total;
}

// Least-squares constant fit of sigma(., A1) against sigma(., A0); a genuine
// extension to the double is non-constant, so the fit must leave a residual.
struct QuotientReport {
  cx best_constant;
  double relative_residual = 0.0;
  bool nonconstant = false;
};

inline QuotientReport quotient_nonconstant(const HardyBasis& basis, cx a0, cx a1,
                                           double threshold = 1e-4) {
  BoundaryFunction s0 = hardy::sigma(basis, a0);
  BoundaryFunction s1 = hardy::sigma(basis, a1);
  const auto& grid = basis.grid();
  const auto& w = basis.weight();
  cx num = hardy::weighted_inner(grid, s1, s0, w);
  cx den = hardy::weighted_inner(grid, s0, s0, w);
  QuotientReport rep;
  rep.best_constant = num / den;
  double resid = 0.0, scale = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    resid += std::norm(s1.samples[i] - rep.best_constant * s0.samples[i]) *
             w.samples[i] * grid.weights[i];
    scale += std::norm(s1.samples[i]) * w.samples[i] * grid.weights[i];
  }
  rep.relative_residual = std::sqrt(resid / scale);
  rep.nonconstant = rep.relative_residual > threshold;
  return rep;
}

// ---------------------------------------------------------------------------
// algebraic dependence of (f, f')

struct DependenceReport {
  int degree_bound = 0;
  int sample_count = 0;
  double min_singular = 0.0;
  std::vector<std::pair<int, int>> monomials;  // exponent of f', exponent of f
  std::vector<cx> relation;                    // unit coefficients, scaled columns
  std::vector<double> column_scales;
  bool dependent = false;
  double fresh_residual = std::numeric_limits<double>::quiet_NaN();

  static constexpr double detection_threshold = 1e-8;
};

// Builds the matrix of monomials f'(z_s)^i f(z_s)^j, i+j <= d, column-scaled
// to unit norm, and extracts the smallest singular pair.  A dependence
// verdict is re-verified on the fresh sample set.
inline DependenceReport algebraic_dependence(const std::vector<cx>& f,
                                             const std::vector<cx>& fprime,
                                             int degree,
                                             const std::vector<cx>& f_fresh = {},
                                             const std::vector<cx>& fprime_fresh = {}) {
  if (degree < 1) fail(errc::usage, "dependence degree bound must be at least 1");
  if (f.size() != fprime.size() || f_fresh.size() != fprime_fresh.size())
    fail(errc::usage, "sample arrays must pair up");
  DependenceReport rep;
  rep.degree_bound = degree;
  rep.sample_count = static_cast<int>(f.size());
  for (int total = 0; total <= degree; ++total)
    for (int i = total; i >= 0; --i) rep.monomials.emplace_back(i, total - i);
  const int cols = static_cast<int>(rep.monomials.size());
  if (rep.sample_count < 3 * cols)
    fail(errc::usage, "need at least three times as many samples as monomials");
  for (cx v : f)
    if (std::abs(v) > 1.0 + 1e-6)
      fail(errc::ill_scaled_samples,
           "f samples leave the closed unit disc; not a proper-map sample set");
  for (cx v : f_fresh)
    if (std::abs(v) > 1.0 + 1e-6)
      fail(errc::ill_scaled_samples, "fresh f samples leave the closed unit disc");

  numerics::DenseMatrix m(rep.sample_count, cols);
  for (int s = 0; s < rep.sample_count; ++s)
    for (int c = 0; c < cols; ++c) {
      auto [i, j] = rep.monomials[c];
      m(s, c) = std::pow(fprime[s], i) * std::pow(f[s], j);
    }
  rep.column_scales.resize(cols);
  for (int c = 0; c < cols; ++c) {
    double nrm = 0.0;
    for (int s = 0; s < rep.sample_count; ++s) nrm += std::norm(m(s, c));
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) fail(errc::ill_scaled_samples, "degenerate monomial column");
    rep.column_scales[c] = nrm;
    for (int s = 0; s < rep.sample_count; ++s) m(s, c) /= nrm;
  }
  auto ms = numerics::min_singular_direction(m);
  rep.min_singular = ms.value;
  rep.relation = ms.direction;
  rep.dependent = ms.value <= DependenceReport::detection_threshold;

  if (rep.dependent && !f_fresh.empty()) {
    // same column scaling, same normalized relation, new sample set
    double acc2 = 0.0;
    for (std::size_t s = 0; s < f_fresh.size(); ++s) {
      cx acc = 0.0;
      for (int c = 0; c < cols; ++c) {
        auto [i, j] = rep.monomials[c];
        acc += rep.relation[c] * std::pow(fprime_fresh[s], i) *
               std::pow(f_fresh[s], j) / rep.column_scales[c];
      }
      acc2 += std::norm(acc);
    }
    rep.fresh_residual = std::sqrt(acc2);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// least-squares decompositions across the two kernel engines

// K(z,w) = 4 pi S(z,w)^2 + sum A_ij F_i'(z) conj(F_j'(w)) over an interior
// pair grid; the A_ij are fitted and the fit residual verifies the identity.
struct BergmanDecomposition {
  numerics::DenseMatrix a;
  double relative_residual = 0.0;
  double hermitian_defect = 0.0;
};

inline BergmanDecomposition bergman_szego_decomposition(
    const potential::DirichletSolver& solver, const HardyBasis& unit_basis,
    const std::vector<potential::HarmonicMeasure>& measures,
    const std::vector<cx>& zs, const std::vector<cx>& ws) {
  const int nf = static_cast<int>(measures.size());
  const int rows = static_cast<int>(zs.size() * ws.size());
  std::vector<cx> lhs(rows);
  numerics::DenseMatrix design(rows, std::max(nf * nf, 1));
  double scale = 0.0;
  int r = 0;
  for (cx z : zs)
    for (cx w : ws) {
      cx k = potential::bergman(solver, z, w);
      cx s = hardy::sigma_point(unit_basis, z, w);
      lhs[r] = k - 4.0 * std::numbers::pi * s * s;
      scale = std::max(scale, std::abs(k));
      for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j)
          design(r, i * nf + j) =
              measures[i].f_prime(z) * std::conj(measures[j].f_prime(w));
      ++r;
    }
  BergmanDecomposition out;
  if (nf == 0) {
    out.a = numerics::DenseMatrix(0, 0);
    double worst = 0.0;
    for (cx v : lhs) worst = std::max(worst, std::abs(v));
    out.relative_residual = worst / scale;
    return out;
  }
  // normal equations for the least-squares fit
  numerics::DenseMatrix gram(nf * nf, nf * nf);
  std::vector<cx> rhs(nf * nf, cx(0.0, 0.0));
  for (int i = 0; i < nf * nf; ++i) {
    for (int j = 0; j < nf * nf; ++j) {
      cx acc = 0.0;
      for (int s = 0; s < rows; ++s) acc += std::conj(design(s, i)) * design(s, j);
      gram(i, j) = acc;
    }
    cx acc = 0.0;
    for (int s = 0; s < rows; ++s) acc += std::conj(design(s, i)) * lhs[s];
    rhs[i] = acc;
  }
  auto coef = numerics::solve(gram, rhs);
  out.a = numerics::DenseMatrix(nf, nf);
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) out.a(i, j) = coef[i * nf + j];
  double worst = 0.0;
  for (int s = 0; s < rows; ++s) {
    cx fit = 0.0;
    for (int c = 0; c < nf * nf; ++c) fit += design(s, c) * coef[c];
    worst = std::max(worst, std::abs(lhs[s] - fit));
  }
  out.relative_residual = worst / scale;
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j)
      out.hermitian_defect =
          std::max(out.hermitian_defect, std::abs(out.a(i, j) - std::conj(out.a(j, i))));
  return out;
}

// dG/dz(z,w) = -pi sigma(z,w) lambda(z,w) / sigma(w,w) + sum c_j(w) F_j'(z),
// fitted in the c_j at fixed w.  (The product identity written with the
// positive Green's function convention; on the disc the sum is empty and
// the two sides match directly.)
struct GreenFit {
  std::vector<cx> c;
  double relative_residual = 0.0;
};

inline GreenFit green_sigma_lambda_fit(
    const potential::DirichletSolver& solver, const HardyBasis& basis,
    const std::vector<potential::HarmonicMeasure>& measures, cx w,
    const std::vector<cx>& zs) {
  potential::GreenFunction g = potential::green(solver, w);
  BoundaryFunction lam = hardy::weighted_garabedian(basis, w);
  double sigma_ww = std::real(hardy::sigma_point(basis, w, w));

  const int nf = static_cast<int>(measures.size());
  const int rows = static_cast<int>(zs.size());
  std::vector<cx> lhs(rows);
  numerics::DenseMatrix design(rows, std::max(nf, 1));
  double scale = 0.0;
  for (int r = 0; r < rows; ++r) {
    cx z = zs[r];
    cx sig = hardy::sigma_point(basis, z, w);
    cx lam_z = hardy::cauchy_interior_eval(basis.grid(), lam, z);
    lhs[r] = g.dz(z) + std::numbers::pi * sig * lam_z / sigma_ww;
    scale = std::max(scale, std::abs(g.dz(z)));
    for (int j = 0; j < nf; ++j) design(r, j) = measures[j].f_prime(z);
  }
  GreenFit out;
  if (nf == 0) {
    double worst = 0.0;
    for (cx v : lhs) worst = std::max(worst, std::abs(v));
    out.relative_residual = worst / scale;
    return out;
  }
  numerics::DenseMatrix gram(nf, nf);
  std::vector<cx> rhs(nf, cx(0.0, 0.0));
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      cx acc = 0.0;
      for (int s = 0; s < rows; ++s) acc += std::conj(design(s, i)) * design(s, j);
      gram(i, j) = acc;
    }
    cx acc = 0.0;
    for (int s = 0; s < rows; ++s) acc += std::conj(design(s, i)) * lhs[s];
    rhs[i] = acc;
  }
  out.c = numerics::solve(gram, rhs);
  double worst = 0.0;
  for (int s = 0; s < rows; ++s) {
    cx fit = 0.0;
    for (int j = 0; j < nf; ++j) fit += design(s, j) * out.c[j];
    worst = std::max(worst, std::abs(lhs[s] - fit));
  }
  out.relative_residual = worst / scale;
  return out;
}

}  // namespace szego::verify
