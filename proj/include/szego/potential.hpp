#pragma once

// Green's function, harmonic measures and their derivative functions F_j',
// the Poisson kernel as a boundary weight, and the Bergman-type kernels
//   K(z,w) = -(2/pi) d^2 G / dz dwbar,   Lambda(z,w) = -(2/pi) d^2 G / dz dw.
//
// The Dirichlet solver expands the harmonic part in a real basis
//   {1, Re z^k, Im z^k, Re (z-c_j)^{-k}, Im (z-c_j)^{-k}, ln|z-c_j|}
// fitted on the boundary by weighted least squares.  The expansion gives
// closed forms for u and du/dz everywhere on the closed domain, which is
// what the Poisson weight and the boundary identities need; the logarithmic
// terms carry the multiply connected part.  The basis is orthonormalized
// once per (domain, grid); each solve is a projection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "szego/errors.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"
#include "szego/numerics.hpp"

namespace szego::potential {

using geometry::BoundaryGrid;
using geometry::Domain;

struct HarmonicElement {
  enum class Kind { constant, re_pos, im_pos, re_neg, im_neg, log_abs };
  Kind kind = Kind::constant;
  int k = 0;
  cx anchor;

  double value(cx z) const {
    switch (kind) {
      case Kind::constant: return 1.0;
      case Kind::re_pos:   return std::real(std::pow(z, k));
      case Kind::im_pos:   return std::imag(std::pow(z, k));
      case Kind::re_neg:   return std::real(std::pow(z - anchor, -k));
      case Kind::im_neg:   return std::imag(std::pow(z - anchor, -k));
      case Kind::log_abs:  return std::log(std::abs(z - anchor));
    }
    return 0.0;
  }

  // d/dz of the element (defined on the closed domain)
  cx dz(cx z) const {
    switch (kind) {
      case Kind::constant: return 0.0;
      case Kind::re_pos:   return 0.5 * double(k) * std::pow(z, k - 1);
      case Kind::im_pos:   return cx(0.0, -0.5) * double(k) * std::pow(z, k - 1);
      case Kind::re_neg:   return -0.5 * double(k) * std::pow(z - anchor, -k - 1);
      case Kind::im_neg:   return cx(0.0, 0.5) * double(k) * std::pow(z - anchor, -k - 1);
      case Kind::log_abs:  return 0.5 / (z - anchor);
    }
    return 0.0;
  }
};

// A solved Dirichlet problem.  Self-contained: evaluation does not refer
// back to the solver.
struct HarmonicFunction {
  std::vector<HarmonicElement> elements;
  std::vector<double> coefficients;
  std::vector<double> log_charges;  // coefficients of the ln|z-c_j| columns
  std::vector<double> boundary_data;
  double residual = 0.0;

  double value(cx z) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < elements.size(); ++j)
      if (coefficients[j] != 0.0) acc += coefficients[j] * elements[j].value(z);
    return acc;
  }
  cx dz(cx z) const {
    cx acc = 0.0;
    for (std::size_t j = 0; j < elements.size(); ++j)
      if (coefficients[j] != 0.0) acc += coefficients[j] * elements[j].dz(z);
    return acc;
  }
};

class DirichletSolver {
 public:
  DirichletSolver(const Domain& domain, BoundaryGrid grid, int order = 32)
      : grid_(std::move(grid)), order_(order) {
    elements_.push_back({HarmonicElement::Kind::constant, 0, 0.0});
    for (int k = 1; k <= order_; ++k) {
      elements_.push_back({HarmonicElement::Kind::re_pos, k, 0.0});
      elements_.push_back({HarmonicElement::Kind::im_pos, k, 0.0});
    }
    for (cx c : domain.hole_anchors()) {
      for (int k = 1; k <= order_; ++k) {
        elements_.push_back({HarmonicElement::Kind::re_neg, k, c});
        elements_.push_back({HarmonicElement::Kind::im_neg, k, c});
      }
      elements_.push_back({HarmonicElement::Kind::log_abs, 0, c});
    }

    std::vector<std::vector<cx>> span(elements_.size());
    prescale_.resize(elements_.size());
    for (std::size_t j = 0; j < elements_.size(); ++j) {
      std::vector<cx> col(grid_.size());
      double nrm = 0.0;
      for (int i = 0; i < grid_.size(); ++i) {
        double v = elements_[j].value(grid_.nodes[i]);
        col[i] = v;
        nrm += v * v * grid_.weights[i];
      }
      nrm = std::sqrt(nrm);
      if (!(nrm > 0.0) || !std::isfinite(nrm))
        fail(errc::singular_matrix, "harmonic basis element has invalid norm");
      for (auto& v : col) v /= nrm;
      prescale_[j] = nrm;
      span[j] = std::move(col);
    }
    auto inner = [this](const std::vector<cx>& u, const std::vector<cx>& v) {
      cx acc = 0.0;
      for (int i = 0; i < grid_.size(); ++i)
        acc += u[i] * std::conj(v[i]) * grid_.weights[i];
      return acc;
    };
    ortho_ = numerics::orthonormalize(span, inner, 1e-12);
  }

  const BoundaryGrid& grid() const { return grid_; }

  HarmonicFunction solve(const std::vector<double>& boundary_data) const {
    if (static_cast<int>(boundary_data.size()) != grid_.size())
      fail(errc::grid_mismatch, "boundary data sampled on a different grid");
    for (double v : boundary_data)
      if (!std::isfinite(v)) fail(errc::usage, "boundary data must be finite");

    const int nq = static_cast<int>(ortho_.vectors.size());
    std::vector<double> proj(nq);
    for (int q = 0; q < nq; ++q) {
      double acc = 0.0;
      const auto& e = ortho_.vectors[q];
      for (int i = 0; i < grid_.size(); ++i)
        acc += boundary_data[i] * std::real(e[i]) * grid_.weights[i];
      proj[q] = acc;
    }
    HarmonicFunction out;
    out.elements = elements_;
    out.boundary_data = boundary_data;
    out.coefficients.assign(elements_.size(), 0.0);
    for (std::size_t j = 0; j < elements_.size(); ++j) {
      double acc = 0.0;
      for (int q = 0; q < nq; ++q)
        acc += std::real(ortho_.transform(static_cast<int>(j), q)) * proj[q];
      out.coefficients[j] = acc / prescale_[j];
    }
    for (std::size_t j = 0; j < elements_.size(); ++j)
      if (elements_[j].kind == HarmonicElement::Kind::log_abs)
        out.log_charges.push_back(out.coefficients[j]);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid_.size(); ++i) {
      double fit = 0.0;
      for (int q = 0; q < nq; ++q)
        fit += proj[q] * std::real(ortho_.vectors[q][i]);
      num += (fit - boundary_data[i]) * (fit - boundary_data[i]) * grid_.weights[i];
      den += boundary_data[i] * boundary_data[i] * grid_.weights[i];
    }
    out.residual = std::sqrt(num) / (1.0 + std::sqrt(den));
    if (out.residual > 1e-7)
      fail(errc::dirichlet_residual,
           "Dirichlet fit residual " + std::to_string(out.residual) +
               "; increase the harmonic order or node count");
    return out;
  }

 private:
  BoundaryGrid grid_;
  int order_;
  std::vector<HarmonicElement> elements_;
  std::vector<double> prescale_;
  numerics::OrthoSet ortho_;
};

inline HarmonicFunction solve_dirichlet(const DirichletSolver& solver,
                                        const std::vector<double>& data) {
  return solver.solve(data);
}

// G(z,w) = -log|z-w| + u_w(z), zero on the boundary, positive inside.
struct GreenFunction {
  cx pole;
  HarmonicFunction harmonic;

  double value(cx z) const { return -std::log(std::abs(z - pole)) + harmonic.value(z); }
  cx dz(cx z) const { return -0.5 / (z - pole) + harmonic.dz(z); }

  // outward normal derivative at a boundary node; the outward unit normal
  // along the standard orientation is -iT
  double normal_derivative(const BoundaryGrid& grid, int node) const {
    cx nu = cx(0.0, -1.0) * grid.tangents[node];
    return 2.0 * std::real(nu * dz(grid.nodes[node]));
  }
};

inline GreenFunction green(const DirichletSolver& solver, cx w) {
  const BoundaryGrid& grid = solver.grid();
  hardy::require_interior(grid, w, "green");
  std::vector<double> data(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    data[i] = std::log(std::abs(grid.nodes[i] - w));
  return GreenFunction{w, solver.solve(data)};
}

// Harmonic measure of the j-th boundary curve (1-based; 1 is the outer
// curve) and the associated holomorphic function F_j' = (1/2) d omega / dz.
struct HarmonicMeasure {
  int curve = 1;
  HarmonicFunction solution;

  double value(cx z) const { return solution.value(z); }
  cx f_prime(cx z) const { return 0.5 * solution.dz(z); }
};

inline HarmonicMeasure harmonic_measure(const DirichletSolver& solver, int j) {
  const BoundaryGrid& grid = solver.grid();
  if (j < 1 || j > grid.curve_count)
    fail(errc::usage, "harmonic_measure: curve index out of range");
  std::vector<double> data(grid.size(), 0.0);
  auto [b, e] = grid.curve_range(j - 1);
  for (int i = b; i < e; ++i) data[i] = 1.0;
  return HarmonicMeasure{j, solver.solve(data)};
}

// Poisson kernel weight phi(z) = p(A0, z) on the grid.  In the positive-G
// convention p = -(1/2pi) dG/dn with the outward normal.
inline hardy::Weight poisson_weight(const DirichletSolver& solver, cx a0) {
  const BoundaryGrid& grid = solver.grid();
  GreenFunction g = green(solver, a0);
  hardy::Weight w;
  w.samples.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    double v = -g.normal_derivative(grid, i) / two_pi;
    if (!(v > 0.0))
      fail(errc::nonpositive_weight,
           "Poisson weight non-positive at node " + std::to_string(i));
    w.samples[i] = v;
  }
  w.description = "poisson";
  // reproducing check on harmonic monomials
  const double tol = 1e-7;
  auto check = [&](auto f, double expect) {
    double acc = 0.0;
    for (int i = 0; i < grid.size(); ++i)
      acc += w.samples[i] * f(grid.nodes[i]) * grid.weights[i];
    if (std::abs(acc - expect) > tol)
      fail(errc::nonpositive_weight,
           "Poisson weight fails the reproducing check by " +
               std::to_string(std::abs(acc - expect)));
  };
  check([](cx) { return 1.0; }, 1.0);
  check([](cx z) { return z.real(); }, a0.real());
  check([](cx z) { return z.imag(); }, a0.imag());
  return w;
}

struct KernelPair {
  cx bergman;
  cx lambda;
};

// Mixed second derivatives of G: dG/dz analytically from the layer
// representation, the w-derivatives by central differences over w with one
// Richardson level.  Default step 1e-4 times the clearance of w.
//
// The z slot is evaluated in closed form, so it stays valid up to the
// closure of the domain; the closure variant skips the interiority gate on
// z for boundary-limit checks.
inline KernelPair bergman_lambda_closure(const DirichletSolver& solver, cx z, cx w,
                                         double step = 0.0) {
  const BoundaryGrid& grid = solver.grid();
  double clearance = grid.distance(w);
  double h = step > 0.0 ? step : 1e-4 * clearance;
  hardy::require_interior(grid, w, "bergman");
  if (std::abs(z - w) <= 10.0 * h)
    fail(errc::separation_violation,
         "bergman/lambda: points closer than 10 finite-difference steps");
  if (clearance < 10.0 * h)
    fail(errc::clearance_violation, "bergman/lambda: w too close to the boundary");

  auto gz = [&](cx wp) { return green(solver, wp).dz(z); };
  auto wirtinger = [&](double hh) -> std::pair<cx, cx> {
    cx dxi = (gz(w + hh) - gz(w - hh)) / (2.0 * hh);
    cx deta = (gz(w + cx(0.0, hh)) - gz(w - cx(0.0, hh))) / (2.0 * hh);
    return {0.5 * (dxi + cx(0.0, 1.0) * deta),   // d/d wbar
            0.5 * (dxi - cx(0.0, 1.0) * deta)};  // d/d w
  };
  auto [wb1, wd1] = wirtinger(h);
  auto [wb2, wd2] = wirtinger(0.5 * h);
  cx dwbar = (4.0 * wb2 - wb1) / 3.0;
  cx dw = (4.0 * wd2 - wd1) / 3.0;
  return {-(2.0 / std::numbers::pi) * dwbar, -(2.0 / std::numbers::pi) * dw};
}

inline KernelPair bergman_lambda(const DirichletSolver& solver, cx z, cx w,
                                 double step = 0.0) {
  hardy::require_interior(solver.grid(), z, "bergman");
  return bergman_lambda_closure(solver, z, w, step);
}

inline cx bergman(const DirichletSolver& solver, cx z, cx w, double step = 0.0) {
  return bergman_lambda(solver, z, w, step).bergman;
}

inline cx lambda_capital(const DirichletSolver& solver, cx z, cx w, double step = 0.0) {
  return bergman_lambda(solver, z, w, step).lambda;
}

}  // namespace szego::potential
