#pragma once

// Weighted boundary inner products, the numerical Hardy-space projection,
// the weighted Szego kernel sigma = P_phi C_a, the weighted Garabedian
// kernel lambda, and interior evaluation by Cauchy integral.
//
// P_phi is realized by least squares onto a rational spanning set
// (monomials plus hole-anchored negative powers) orthonormalized under the
// weighted boundary inner product; one engine serves every weight.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "szego/errors.hpp"
#include "szego/geometry.hpp"
#include "szego/numerics.hpp"

namespace szego::hardy {

using geometry::BoundaryGrid;
using geometry::Domain;

struct Weight {
  std::vector<double> samples;  // phi(z_i) > 0
  std::string description = "custom";

  static Weight unit(const BoundaryGrid& grid) {
    return {std::vector<double>(grid.size(), 1.0), "unit"};
  }
};

inline void require_weight(const BoundaryGrid& grid, const Weight& w) {
  if (static_cast<int>(w.samples.size()) != grid.size())
    fail(errc::grid_mismatch, "weight sampled on a different grid");
  for (double v : w.samples)
    if (!(v > 0.0) || !std::isfinite(v))
      fail(errc::nonpositive_weight, "weight must be strictly positive");
}

// A known pole of the interior extension: coefficient / (z - location)^order.
struct SingularPart {
  cx location;
  int order = 1;
  cx coefficient;

  cx eval(cx z) const { return coefficient / std::pow(z - location, order); }
  cx eval_derivative(cx z, int d) const {
    double factor = 1.0;
    for (int j = 0; j < d; ++j) factor *= -(order + j);
    return coefficient * factor / std::pow(z - location, order + d);
  }
};

struct BoundaryFunction {
  std::vector<cx> samples;
  std::vector<SingularPart> singular_parts;

  BoundaryFunction() = default;
  explicit BoundaryFunction(std::vector<cx> s, std::vector<SingularPart> p = {})
      : samples(std::move(s)), singular_parts(std::move(p)) {}
};

inline void require_same_grid(const BoundaryGrid& grid, const BoundaryFunction& f) {
  if (static_cast<int>(f.samples.size()) != grid.size())
    fail(errc::grid_mismatch, "boundary function sampled on a different grid");
}

// Quadrature of  int u conj(v) phi ds.
inline cx weighted_inner(const BoundaryGrid& grid, const BoundaryFunction& u,
                         const BoundaryFunction& v, const Weight& w) {
  require_same_grid(grid, u);
  require_same_grid(grid, v);
  require_weight(grid, w);
  cx acc = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    acc += u.samples[i] * std::conj(v.samples[i]) * w.samples[i] * grid.weights[i];
  return acc;
}

inline double weighted_norm(const BoundaryGrid& grid, const BoundaryFunction& u,
                            const Weight& w) {
  return std::sqrt(std::abs(std::real(weighted_inner(grid, u, u, w))));
}

inline void require_interior(const BoundaryGrid& grid, cx z, const char* who) {
  cx acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) acc += grid.dz[i] / (grid.nodes[i] - z);
  double wind = std::imag(acc) / two_pi;
  if (std::abs(wind - std::round(wind)) > 0.25)
    fail(errc::boundary_proximity,
         std::string(who) + ": point too close to the boundary");
  if (std::lround(wind) != 1)
    fail(errc::point_not_interior, std::string(who) + ": point not interior");
}

// Value at z of the holomorphic extension of f: subtract the declared
// singular parts, run the boundary Cauchy integral by grid quadrature, add
// the singular parts back at z.
inline constexpr double cauchy_clearance_ratio = 4.0;

inline cx cauchy_interior_eval(const BoundaryGrid& grid, const BoundaryFunction& f,
                               cx z) {
  require_same_grid(grid, f);
  require_interior(grid, z, "cauchy_interior_eval");
  if (grid.clearance_ratio(z) < cauchy_clearance_ratio)
    fail(errc::clearance_violation,
         "cauchy_interior_eval: point within a few grid spacings of the boundary");
  cx acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    cx reg = f.samples[i];
    for (const auto& p : f.singular_parts) reg -= p.eval(grid.nodes[i]);
    acc += reg * grid.dz[i] / (grid.nodes[i] - z);
  }
  cx val = acc / cx(0.0, two_pi);
  for (const auto& p : f.singular_parts) val += p.eval(z);
  return val;
}

// d-th derivative of the interior extension at z.
inline cx cauchy_interior_derivative(const BoundaryGrid& grid,
                                     const BoundaryFunction& f, cx z, int d) {
  if (d == 0) return cauchy_interior_eval(grid, f, z);
  require_same_grid(grid, f);
  require_interior(grid, z, "cauchy_interior_derivative");
  if (grid.clearance_ratio(z) < cauchy_clearance_ratio)
    fail(errc::clearance_violation,
         "cauchy_interior_derivative: point within a few grid spacings of the boundary");
  double dfact = 1.0;
  for (int j = 2; j <= d; ++j) dfact *= j;
  cx acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    cx reg = f.samples[i];
    for (const auto& p : f.singular_parts) reg -= p.eval(grid.nodes[i]);
    acc += reg * grid.dz[i] / std::pow(grid.nodes[i] - z, d + 1);
  }
  cx val = dfact * acc / cx(0.0, two_pi);
  for (const auto& p : f.singular_parts) val += p.eval_derivative(z, d);
  return val;
}

// One element of the rational spanning set: z^k or (z - anchor)^{-k}.
struct RawBasisElement {
  int power = 0;  // k >= 0 for monomials, k >= 1 for negative powers
  cx anchor;
  bool negative = false;

  cx eval(cx z) const {
    return negative ? std::pow(z - anchor, -power) : std::pow(z, power);
  }
  cx eval_derivative(cx z, int d) const {
    if (!negative) {
      if (d > power) return 0.0;
      double factor = 1.0;
      for (int j = 0; j < d; ++j) factor *= power - j;
      return factor * std::pow(z, power - d);
    }
    double factor = 1.0;
    for (int j = 0; j < d; ++j) factor *= -(power + j);
    return factor * std::pow(z - anchor, -(power + d));
  }
};

// An orthonormalized finite spanning set of the Hardy space under the
// weighted boundary inner product.  Immutable after construction.
class HardyBasis {
 public:
  HardyBasis(const Domain& domain, BoundaryGrid grid, Weight weight, int order)
      : grid_(std::move(grid)), weight_(std::move(weight)), order_(order) {
    if (order < 4) fail(errc::usage, "basis order must be at least 4");
    if (order > grid_.nodes_per_curve / 2 - 2)
      fail(errc::basis_quality,
           "basis order " + std::to_string(order) +
               " aliases on " + std::to_string(grid_.nodes_per_curve) +
               " nodes per curve; increase the node count or reduce the order");
    require_weight(grid_, weight_);
    for (int k = 0; k <= order; ++k) raw_.push_back({k, 0.0, false});
    for (cx c : domain.hole_anchors())
      for (int k = 1; k <= order; ++k) raw_.push_back({k, c, true});

    std::vector<std::vector<cx>> span(raw_.size());
    prescale_.resize(raw_.size());
    for (std::size_t j = 0; j < raw_.size(); ++j) {
      std::vector<cx> col(grid_.size());
      for (int i = 0; i < grid_.size(); ++i) col[i] = raw_[j].eval(grid_.nodes[i]);
      double nrm = 0.0;
      for (int i = 0; i < grid_.size(); ++i)
        nrm += std::norm(col[i]) * weight_.samples[i] * grid_.weights[i];
      nrm = std::sqrt(nrm);
      if (!(nrm > 0.0) || !std::isfinite(nrm))
        fail(errc::basis_quality, "raw basis element has invalid norm");
      for (auto& v : col) v /= nrm;
      prescale_[j] = nrm;
      span[j] = std::move(col);
    }
    auto inner = [this](const std::vector<cx>& u, const std::vector<cx>& v) {
      cx acc = 0.0;
      for (int i = 0; i < grid_.size(); ++i)
        acc += u[i] * std::conj(v[i]) * weight_.samples[i] * grid_.weights[i];
      return acc;
    };
    ortho_ = numerics::orthonormalize(span, inner, drop_tolerance);

    // closed-form coefficients of each orthonormal vector over the raw set
    eval_coeffs_ = numerics::DenseMatrix(static_cast<int>(raw_.size()), size());
    for (int q = 0; q < size(); ++q)
      for (std::size_t j = 0; j < raw_.size(); ++j)
        eval_coeffs_(static_cast<int>(j), q) =
            ortho_.transform(static_cast<int>(j), q) / prescale_[j];

    quality_ = polynomial_reproduction_residual();
    if (quality_ > 1e-8)
      fail(errc::basis_quality,
           "basis quality " + std::to_string(quality_) +
               "; increase the node count or reduce the basis order");
  }

  static constexpr double drop_tolerance = 1e-12;

  const BoundaryGrid& grid() const { return grid_; }
  const Weight& weight() const { return weight_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(ortho_.vectors.size()); }
  double quality() const { return quality_; }
  const std::vector<RawBasisElement>& raw() const { return raw_; }
  const numerics::OrthoSet& ortho() const { return ortho_; }

  const std::vector<cx>& ortho_vector(int q) const { return ortho_.vectors[q]; }

  // Interior (and boundary) evaluation of the q-th orthonormal element via
  // the rational closed forms.
  cx eval_ortho(int q, cx z) const {
    cx acc = 0.0;
    for (std::size_t j = 0; j < raw_.size(); ++j) {
      cx c = eval_coeffs_(static_cast<int>(j), q);
      if (c != cx(0.0, 0.0)) acc += c * raw_[j].eval(z);
    }
    return acc;
  }

  cx inner_with_ortho(const BoundaryFunction& u, int q) const {
    cx acc = 0.0;
    for (int i = 0; i < grid_.size(); ++i)
      acc += u.samples[i] * std::conj(ortho_.vectors[q][i]) * weight_.samples[i] *
             grid_.weights[i];
    return acc;
  }

  std::vector<cx> project_coefficients(const BoundaryFunction& u) const {
    require_same_grid(grid_, u);
    std::vector<cx> c(size());
    for (int q = 0; q < size(); ++q) c[q] = inner_with_ortho(u, q);
    return c;
  }

  BoundaryFunction combine(const std::vector<cx>& coeffs) const {
    std::vector<cx> s(grid_.size(), cx(0.0, 0.0));
    for (int q = 0; q < size(); ++q)
      for (int i = 0; i < grid_.size(); ++i) s[i] += coeffs[q] * ortho_.vectors[q][i];
    return BoundaryFunction(std::move(s));
  }

 private:
  double polynomial_reproduction_residual() const {
    double worst = 0.0;
    for (int k = 0; k <= order_ / 2; ++k) {
      BoundaryFunction u;
      u.samples.resize(grid_.size());
      for (int i = 0; i < grid_.size(); ++i)
        u.samples[i] = std::pow(grid_.nodes[i], k);
      auto coeffs = project_coefficients(u);
      BoundaryFunction pu = combine(coeffs);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < grid_.size(); ++i) {
        num += std::norm(pu.samples[i] - u.samples[i]) * weight_.samples[i] *
               grid_.weights[i];
        den += std::norm(u.samples[i]) * weight_.samples[i] * grid_.weights[i];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
  }

  BoundaryGrid grid_;
  Weight weight_;
  int order_;
  std::vector<RawBasisElement> raw_;
  std::vector<double> prescale_;
  numerics::OrthoSet ortho_;
  numerics::DenseMatrix eval_coeffs_;
  double quality_ = 0.0;
};

inline HardyBasis build_hardy_basis(const Domain& domain, const BoundaryGrid& grid,
                                    const Weight& w, int order) {
  return HardyBasis(domain, grid, w, order);
}

// Orthogonal projection onto the numerical Hardy space.
inline BoundaryFunction szego_project(const BoundaryFunction& u,
                                      const HardyBasis& basis) {
  return basis.combine(basis.project_coefficients(u));
}

// Weighted Cauchy kernel C_a(z) = conj( (1/2pi i) phi^{-1}(z) T(z)/(z-a) ).
inline BoundaryFunction weighted_cauchy_kernel(const BoundaryGrid& grid, cx a,
                                               const Weight& w) {
  require_weight(grid, w);
  require_interior(grid, a, "weighted_cauchy_kernel");
  BoundaryFunction f;
  f.samples.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    cx v = grid.tangents[i] / (w.samples[i] * (grid.nodes[i] - a) * cx(0.0, two_pi));
    f.samples[i] = std::conj(v);
  }
  return f;
}

// Weighted Szego kernel sigma(., a) = P_phi C_a as boundary samples.
inline BoundaryFunction sigma(const HardyBasis& basis, cx a) {
  BoundaryFunction c = weighted_cauchy_kernel(basis.grid(), a, basis.weight());
  return szego_project(c, basis);
}

// Pointwise kernel value sigma(z, w) via the orthonormal expansion.
inline cx sigma_point(const HardyBasis& basis, cx z, cx w) {
  cx acc = 0.0;
  for (int q = 0; q < basis.size(); ++q)
    acc += basis.eval_ortho(q, z) * std::conj(basis.eval_ortho(q, w));
  return acc;
}

// n-th derivative of sigma(z, a) in conj(a), by central finite differences
// over the base point with one Richardson extrapolation level.  sigma is
// antiholomorphic in a, so a one-dimensional stencil in conj(a) suffices.
inline BoundaryFunction sigma_dbar(const HardyBasis& basis, cx a, int n,
                                   double step = 0.0) {
  if (n < 0 || n > 4) fail(errc::usage, "sigma_dbar supports derivative orders 0..4");
  if (n == 0) return sigma(basis, a);
  double clearance = basis.grid().distance(a);
  double h = step > 0.0 ? step : 1e-3 * clearance;
  if (clearance < 10.0 * h)
    fail(errc::clearance_violation, "sigma_dbar: base point too close to the boundary");

  const int m = basis.grid().size();
  std::map<int, std::vector<cx>> cache;  // key: offset in units of h/2
  auto value = [&](int s) -> const std::vector<cx>& {
    auto it = cache.find(s);
    if (it == cache.end())
      it = cache.emplace(s, sigma(basis, a + cx(0.5 * h * s, 0.0)).samples).first;
    return it->second;
  };
  auto stencil = [&](int unit) {  // derivative with step hh = unit*(h/2)
    double hh = 0.5 * h * unit;
    std::vector<cx> d(m, cx(0.0, 0.0));
    auto add = [&](int s, double c) {
      const auto& v = value(s * unit);
      for (int i = 0; i < m; ++i) d[i] += c * v[i];
    };
    switch (n) {
      case 1:
        add(1, 0.5 / hh), add(-1, -0.5 / hh);
        break;
      case 2:
        add(1, 1.0 / (hh * hh)), add(0, -2.0 / (hh * hh)), add(-1, 1.0 / (hh * hh));
        break;
      case 3:
        add(2, 0.5 / (hh * hh * hh)), add(1, -1.0 / (hh * hh * hh)),
            add(-1, 1.0 / (hh * hh * hh)), add(-2, -0.5 / (hh * hh * hh));
        break;
      case 4: {
        double h4 = hh * hh * hh * hh;
        add(2, 1.0 / h4), add(1, -4.0 / h4), add(0, 6.0 / h4), add(-1, -4.0 / h4),
            add(-2, 1.0 / h4);
        break;
      }
    }
    return d;
  };
  std::vector<cx> coarse = stencil(2), fine = stencil(1);
  BoundaryFunction out;
  out.samples.resize(m);
  for (int i = 0; i < m; ++i)
    out.samples[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

struct GarabedianParts {
  BoundaryFunction lambda;
  BoundaryFunction hardy_component;  // H_a
  double hardy_residual = 0.0;       // Hardy-membership defect of H_a
};

// Weighted Garabedian kernel from the orthogonal decomposition
//   C_a = sigma(., a) + phi^{-1} conj(H_a T),
// i.e. H_a = conj((C_a - sigma) phi) conj(T), lambda = 1/(2pi(z-a)) - i H_a.
inline GarabedianParts weighted_garabedian_parts(const HardyBasis& basis, cx a) {
  const BoundaryGrid& grid = basis.grid();
  const Weight& w = basis.weight();
  BoundaryFunction c = weighted_cauchy_kernel(grid, a, w);
  BoundaryFunction s = szego_project(c, basis);

  GarabedianParts out;
  out.hardy_component.samples.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    out.hardy_component.samples[i] =
        std::conj((c.samples[i] - s.samples[i]) * w.samples[i]) *
        std::conj(grid.tangents[i]);

  BoundaryFunction ph = szego_project(out.hardy_component, basis);
  double num = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    num += std::norm(ph.samples[i] - out.hardy_component.samples[i]) *
           w.samples[i] * grid.weights[i];
  double hn = weighted_norm(grid, out.hardy_component, w);
  out.hardy_residual = std::sqrt(num) / (1.0 + hn);
  if (out.hardy_residual > 1e-7)
    fail(errc::decomposition_residual,
         "weighted_garabedian: Hardy-membership residual " +
             std::to_string(out.hardy_residual));

  out.lambda.samples.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    out.lambda.samples[i] = 1.0 / (two_pi * (grid.nodes[i] - a)) -
                            cx(0.0, 1.0) * out.hardy_component.samples[i];
  out.lambda.singular_parts.push_back({a, 1, cx(1.0 / two_pi, 0.0)});
  return out;
}

inline BoundaryFunction weighted_garabedian(const HardyBasis& basis, cx a) {
  return weighted_garabedian_parts(basis, a).lambda;
}

}  // namespace szego::hardy
