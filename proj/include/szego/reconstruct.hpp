#pragma once

// Finite-rank reconstruction of the weighted Szego and Garabedian kernels
// from a proper map f and the kernel data at the zeros of f:
//
//   sigma(z,w) (1 - f(z) conj(f(w)))
//       = sum_{(i,n),(j,m)} c  sigma_nbar(z,a_i) conj(sigma_mbar(w,a_j)),
//
// with derivative orders n = 0..M(i)-1 at a zero of multiplicity M(i), and
// the coefficient array the inverse of [sigma_{n mbar}(a_i, a_j)].  For
// simple zeros this collapses to the inverse of [sigma(a_i, a_j)], and the
// companion formula transports the Garabedian kernel.
//
// The derivative orders stop at M(i)-1: with the inclusive limit the
// per-level families overlap across powers of f (f^{M} itself reappears),
// the level orthogonality fails at the corner m = M(j), and the coefficient
// system stops reproducing the kernel.  The exclusive limit gives exactly
// sum M(i) functions per level and an exact reconstruction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "szego/classical.hpp"
#include "szego/errors.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"
#include "szego/numerics.hpp"

namespace szego::reconstruct {

using classical::ProperMap;
using geometry::BoundaryGrid;
using geometry::Domain;
using hardy::BoundaryFunction;
using hardy::HardyBasis;
using numerics::DenseMatrix;

struct ReconstructionCoefficients {
  enum class Kind { simple, general };
  Kind kind = Kind::simple;
  DenseMatrix c;              // inverse of source_matrix
  DenseMatrix source_matrix;  // [sigma_{n mbar}(a_i, a_j)] over the index map
  std::vector<std::pair<int, int>> index_map;  // flattened -> (zero, order)
  double inverse_defect = 0.0;  // max entry of |c*source - I| and |source*c - I|
};

namespace detail {

inline double two_sided_inverse_defect(const DenseMatrix& c, const DenseMatrix& m) {
  const int n = c.rows();
  DenseMatrix cm = c.multiply(m), mc = m.multiply(c);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cx id = i == j ? cx(1.0, 0.0) : cx(0.0, 0.0);
      worst = std::max(worst, std::abs(cm(i, j) - id));
      worst = std::max(worst, std::abs(mc(i, j) - id));
    }
  return worst;
}

inline DenseMatrix invert(const DenseMatrix& m) {
  const int n = m.rows();
  numerics::LuFactorization lu(m, numerics::default_solver_eps);
  DenseMatrix inv(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<cx> e(n, cx(0.0, 0.0));
    e[j] = 1.0;
    auto col = lu.solve(e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace detail

// The sigma-derivative family attached to a proper map: sigma_nbar(., a_i)
// for 0 <= n <= M(i)-1, plus the power-index bookkeeping.
struct BasisFamily {
  ProperMap f;
  std::vector<std::vector<BoundaryFunction>> sigma_derivs;  // [zero][order]
  int p_max = 3;

  std::vector<std::pair<int, int>> index_map() const {
    std::vector<std::pair<int, int>> map;
    for (std::size_t i = 0; i < f.zeros.size(); ++i)
      for (int n = 0; n < f.multiplicities[i]; ++n)
        map.emplace_back(static_cast<int>(i), n);
    return map;
  }

  // boundary samples of h_{inp} = sigma_nbar(., a_i) f^p
  std::vector<cx> h_samples(int i, int n, int p) const {
    std::vector<cx> s = sigma_derivs[i][n].samples;
    for (std::size_t k = 0; k < s.size(); ++k)
      s[k] *= std::pow(f.boundary.samples[k], p);
    return s;
  }
};

inline BasisFamily build_basis_family(const HardyBasis& basis, const ProperMap& f,
                                      int p_max = 3) {
  if (f.zeros.empty()) fail(errc::usage, "proper map carries no zeros");
  {
    int wind = classical::boundary_winding(basis.grid(), f.boundary);
    if (wind != f.degree())
      fail(errc::zero_count_mismatch,
           "proper map degree " + std::to_string(wind) +
               " does not match its zero multiplicities");
  }
  BasisFamily fam;
  fam.f = f;
  fam.p_max = p_max;
  fam.sigma_derivs.resize(f.zeros.size());
  for (std::size_t i = 0; i < f.zeros.size(); ++i)
    for (int n = 0; n < f.multiplicities[i]; ++n)
      fam.sigma_derivs[i].push_back(hardy::sigma_dbar(basis, f.zeros[i], n));
  return fam;
}

// Coefficients for the general formula: invert the matrix of mixed kernel
// derivatives at the zeros.
inline ReconstructionCoefficients reconstruction_coefficients(
    const HardyBasis& basis, const BasisFamily& family) {
  auto map = family.index_map();
  const int n = static_cast<int>(map.size());
  DenseMatrix source(n, n);
  for (int row = 0; row < n; ++row) {
    auto [i, dn] = map[row];
    for (int col = 0; col < n; ++col) {
      auto [j, dm] = map[col];
      // sigma_{n mbar}(a_i, a_j): z-derivatives through the Cauchy integral
      source(row, col) = hardy::cauchy_interior_derivative(
          basis.grid(), family.sigma_derivs[j][dm], family.f.zeros[i], dn);
    }
  }
  ReconstructionCoefficients out;
  out.kind = std::all_of(family.f.multiplicities.begin(), family.f.multiplicities.end(),
                         [](int m) { return m == 1; })
                 ? ReconstructionCoefficients::Kind::simple
                 : ReconstructionCoefficients::Kind::general;
  out.index_map = map;
  out.source_matrix = source;
  try {
    out.c = detail::invert(source);
  } catch (const Error& e) {
    fail(errc::singular_matrix,
         std::string("reconstruction system singular: ") + e.what());
  }
  out.inverse_defect = detail::two_sided_inverse_defect(out.c, out.source_matrix);
  if (out.inverse_defect > 1e-8)
    fail(errc::singular_matrix,
         "reconstruction coefficients fail the two-sided inverse check: " +
             std::to_string(out.inverse_defect));
  return out;
}

// Evaluator for the reconstructed weighted Szego kernel.
class WeightedSzegoRecon {
 public:
  WeightedSzegoRecon(BoundaryGrid grid, BasisFamily family,
                     ReconstructionCoefficients coeffs)
      : grid_(std::move(grid)), family_(std::move(family)), coeffs_(std::move(coeffs)) {}

  cx evaluate(cx z, cx w) const {
    cx fz = hardy::cauchy_interior_eval(grid_, family_.f.boundary, z);
    cx fw = hardy::cauchy_interior_eval(grid_, family_.f.boundary, w);
    const auto& map = coeffs_.index_map;
    cx acc = 0.0;
    for (std::size_t r = 0; r < map.size(); ++r) {
      auto [i, dn] = map[r];
      cx left = hardy::cauchy_interior_eval(grid_, family_.sigma_derivs[i][dn], z);
      for (std::size_t s = 0; s < map.size(); ++s) {
        auto [j, dm] = map[s];
        cx right = hardy::cauchy_interior_eval(grid_, family_.sigma_derivs[j][dm], w);
        acc += coeffs_.c(static_cast<int>(r), static_cast<int>(s)) * left *
               std::conj(right);
      }
    }
    return acc / (1.0 - fz * std::conj(fw));
  }

  const ReconstructionCoefficients& coefficients() const { return coeffs_; }
  const BasisFamily& family() const { return family_; }

 private:
  BoundaryGrid grid_;
  BasisFamily family_;
  ReconstructionCoefficients coeffs_;
};

inline WeightedSzegoRecon weighted_szego_formula_simple(const HardyBasis& basis,
                                                        const ProperMap& f) {
  if (!f.simple())
    fail(errc::degenerate_zeros,
         "weighted_szego_formula_simple requires simple zeros; "
         "compose with a Mobius transformation first");
  BasisFamily fam = build_basis_family(basis, f);
  auto coeffs = reconstruction_coefficients(basis, fam);
  return WeightedSzegoRecon(basis.grid(), std::move(fam), std::move(coeffs));
}

inline WeightedSzegoRecon weighted_szego_formula_general(const HardyBasis& basis,
                                                         const ProperMap& f) {
  BasisFamily fam = build_basis_family(basis, f);
  auto coeffs = reconstruction_coefficients(basis, fam);
  return WeightedSzegoRecon(basis.grid(), std::move(fam), std::move(coeffs));
}

// Evaluator for the reconstructed weighted Garabedian kernel,
//   lambda(w,z) = f(w)/(f(w) - f(z)) sum c_ij sigma(z,a_i) lambda(w,a_j).
class WeightedGarabedianRecon {
 public:
  WeightedGarabedianRecon(const HardyBasis& basis, BasisFamily family,
                          ReconstructionCoefficients coeffs)
      : grid_(basis.grid()), family_(std::move(family)), coeffs_(std::move(coeffs)) {
    if (coeffs_.kind != ReconstructionCoefficients::Kind::simple)
      fail(errc::degenerate_zeros,
           "Garabedian reconstruction needs simple-zero coefficients");
    for (cx a : family_.f.zeros)
      lambdas_.push_back(hardy::weighted_garabedian(basis, a));
  }

  // lambda(w, z); w must stay away from the level set f(w) = f(z)
  cx evaluate(cx w, cx z) const {
    cx fw = hardy::cauchy_interior_eval(grid_, family_.f.boundary, w);
    cx fz = hardy::cauchy_interior_eval(grid_, family_.f.boundary, z);
    if (std::abs(fw - fz) < 1e-8)
      fail(errc::separation_violation,
           "lambda reconstruction evaluated where f(w) = f(z)");
    const int n = static_cast<int>(family_.f.zeros.size());
    cx acc = 0.0;
    for (int i = 0; i < n; ++i) {
      cx sig = hardy::cauchy_interior_eval(grid_, family_.sigma_derivs[i][0], z);
      for (int j = 0; j < n; ++j) {
        cx lam = hardy::cauchy_interior_eval(grid_, lambdas_[j], w);
        acc += coeffs_.c(i, j) * sig * lam;
      }
    }
    return acc * fw / (fw - fz);
  }

 private:
  BoundaryGrid grid_;
  BasisFamily family_;
  ReconstructionCoefficients coeffs_;
  std::vector<BoundaryFunction> lambdas_;
};

inline WeightedGarabedianRecon weighted_garabedian_formula(
    const HardyBasis& basis, const ProperMap& f,
    const ReconstructionCoefficients& coeffs) {
  BasisFamily fam = build_basis_family(basis, f);
  return WeightedGarabedianRecon(basis, std::move(fam), coeffs);
}

// The classical identity (Szego kernel from one Ahlfors map):
//   S(z,w) (1 - f_a(z) conj(f_a(w)))
//     = c0 S(z,a) conj(S(w,a)) + sum c_ij S(z,a_i) conj(S(w,a_j)),
// c0 = 1/S(a,a), [c_ij] the inverse of [S(a_i, a_j)] over the zeros of
// S(., a).
class ClassicalSzegoFormula {
 public:
  ClassicalSzegoFormula(const Domain& domain, const HardyBasis& basis, cx a)
      : grid_(basis.grid()), base_(a) {
    map_ = classical::ahlfors(domain, basis, a);
    double sep = 1e-4 * domain.diameter();
    for (std::size_t i = 1; i < map_.zeros.size(); ++i)
      for (std::size_t j = i + 1; j < map_.zeros.size(); ++j)
        if (std::abs(map_.zeros[i] - map_.zeros[j]) <= sep)
          fail(errc::degenerate_zeros,
               "zeros of S(., a) are not distinct simple zeros; move the base point");
    c0_ = 1.0 / std::real(hardy::sigma_point(basis, a, a));
    const int n = static_cast<int>(map_.zeros.size()) - 1;
    for (int i = 0; i < n; ++i)
      szego_at_zero_.push_back(hardy::sigma(basis, map_.zeros[i + 1]));
    source_ = DenseMatrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        source_(i, j) = hardy::cauchy_interior_eval(grid_, szego_at_zero_[j],
                                                    map_.zeros[i + 1]);
    if (n > 0) {
      c_ = detail::invert(source_);
      inverse_defect_ = detail::two_sided_inverse_defect(c_, source_);
      if (inverse_defect_ > 1e-8)
        fail(errc::singular_matrix,
             "[S(a_j,a_k)] inverse fails the two-sided check: " +
                 std::to_string(inverse_defect_));
    }
  }

  cx evaluate(cx z, cx w) const {
    cx fz = hardy::cauchy_interior_eval(grid_, map_.boundary, z);
    cx fw = hardy::cauchy_interior_eval(grid_, map_.boundary, w);
    cx sz = hardy::cauchy_interior_eval(grid_, map_.szego, z);
    cx sw = hardy::cauchy_interior_eval(grid_, map_.szego, w);
    cx acc = c0_ * sz * std::conj(sw);
    const int n = static_cast<int>(szego_at_zero_.size());
    for (int i = 0; i < n; ++i) {
      cx li = hardy::cauchy_interior_eval(grid_, szego_at_zero_[i], z);
      for (int j = 0; j < n; ++j) {
        cx rj = hardy::cauchy_interior_eval(grid_, szego_at_zero_[j], w);
        acc += c_(i, j) * li * std::conj(rj);
      }
    }
    return acc / (1.0 - fz * std::conj(fw));
  }

  double c0() const { return c0_; }
  const classical::AhlforsMap& map() const { return map_; }
  double inverse_defect() const { return inverse_defect_; }

 private:
  BoundaryGrid grid_;
  cx base_;
  classical::AhlforsMap map_;
  double c0_ = 0.0;
  std::vector<BoundaryFunction> szego_at_zero_;
  DenseMatrix source_, c_;
  double inverse_defect_ = 0.0;
};

inline ClassicalSzegoFormula classical_szego_formula(const Domain& domain,
                                                     const HardyBasis& basis, cx a) {
  return ClassicalSzegoFormula(domain, basis, a);
}

// Gram-Schmidt p-independence: orthonormalize the level-p families for
// p = 0 and p = 1 in identical index order and compare the change-of-basis
// coefficients.  With the weights at level 1 deliberately perturbed the
// coefficients must drift by a visible amount (negative control).
struct PIndependenceReport {
  double max_deviation = 0.0;
  bool perturbed = false;
};

inline PIndependenceReport gram_schmidt_p_independence(const HardyBasis& basis,
                                                       const BasisFamily& family,
                                                       bool perturb_control = false) {
  if (family.p_max < 2)
    fail(errc::usage, "p-independence needs p_max >= 2");
  const BoundaryGrid& grid = basis.grid();
  auto map = family.index_map();

  auto level_transform = [&](int p, bool perturb) {
    std::vector<std::vector<cx>> span;
    for (auto [i, n] : map) span.push_back(family.h_samples(i, n, p));
    std::vector<double> w = basis.weight().samples;
    if (perturb)
      for (int k = 0; k < grid.size(); ++k)
        w[k] *= 1.0 + 0.05 * std::cos(grid.params[k]);
    auto inner = [&](const std::vector<cx>& u, const std::vector<cx>& v) {
      cx acc = 0.0;
      for (int k = 0; k < grid.size(); ++k)
        acc += u[k] * std::conj(v[k]) * w[k] * grid.weights[k];
      return acc;
    };
    auto o = numerics::orthonormalize(span, inner, 1e-12);
    if (!o.dropped.empty())
      fail(errc::degenerate_zeros,
           "level family is numerically dependent; zeros too close");
    return o.transform;
  };

  auto t0 = level_transform(0, false);
  auto t1 = level_transform(1, perturb_control);
  PIndependenceReport rep;
  rep.perturbed = perturb_control;
  for (int i = 0; i < t0.rows(); ++i)
    for (int q = 0; q < t0.cols(); ++q)
      rep.max_deviation = std::max(rep.max_deviation, std::abs(t0(i, q) - t1(i, q)));
  return rep;
}

}  // namespace szego::reconstruct
