#pragma once

// Boundary curves, finitely connected domains, point membership, and
// spectrally accurate boundary quadrature.
//
// Curves are finite trigonometric polynomials z(t) = sum c_k e^{ikt} on
// [0,2pi).  The class is closed under differentiation and the composite
// trapezoid rule integrates analytic periodic functions with geometric
// convergence, so arc-length quadrature on these curves is spectral.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "szego/errors.hpp"

namespace szego {

using cx = std::complex<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace geometry {

class Curve {
 public:
  Curve() = default;
  Curve(std::vector<cx> fourier, int kmin)
      : coeffs_(std::move(fourier)), kmin_(kmin) {
    if (coeffs_.empty())
      fail(errc::invalid_domain, "curve has no fourier coefficients");
  }

  cx point(double t) const { return sum(t, 0); }
  cx velocity(double t) const { return sum(t, 1); }  // z'(t)

  // z(-t): the same curve traversed in the opposite direction.
  Curve reversed() const {
    int kmax = kmin_ + static_cast<int>(coeffs_.size()) - 1;
    std::vector<cx> rev(coeffs_.rbegin(), coeffs_.rend());
    return Curve(std::move(rev), -kmax);
  }

  // (1/2) Im oint conj(z) dz; positive for counterclockwise traversal.
  double signed_area(int samples = 1024) const {
    double acc = 0.0;
    double dt = two_pi / samples;
    for (int i = 0; i < samples; ++i) {
      double t = dt * i;
      acc += std::imag(std::conj(point(t)) * velocity(t));
    }
    return 0.5 * acc * dt;
  }

  double length(int samples = 1024) const {
    double acc = 0.0;
    double dt = two_pi / samples;
    for (int i = 0; i < samples; ++i) acc += std::abs(velocity(dt * i));
    return acc * dt;
  }

  const std::vector<cx>& coeffs() const { return coeffs_; }
  int kmin() const { return kmin_; }

 private:
  cx sum(double t, int deriv) const {
    const cx step = std::polar(1.0, t);
    cx w = std::polar(1.0, kmin_ * t);
    cx acc = 0.0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      int k = kmin_ + static_cast<int>(j);
      cx term = coeffs_[j];
      if (deriv == 1) term *= cx(0.0, static_cast<double>(k));
      acc += term * w;
      w *= step;
    }
    return acc;
  }

  std::vector<cx> coeffs_;
  int kmin_ = 0;
};

namespace detail {

struct DenseCurve {
  std::vector<cx> z;
  std::vector<cx> dz;  // z'(t_i) * dt
};

inline DenseCurve densify(const Curve& c, int n) {
  DenseCurve d;
  d.z.resize(n);
  d.dz.resize(n);
  double dt = two_pi / n;
  for (int i = 0; i < n; ++i) {
    double t = dt * i;
    d.z[i] = c.point(t);
    d.dz[i] = c.velocity(t) * dt;
  }
  return d;
}

// Im( sum dz/(z - p) ) / 2pi over a family of sampled curves.
inline double winding_sum(const std::vector<DenseCurve>& curves, cx p) {
  cx acc = 0.0;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.z.size(); ++i) acc += c.dz[i] / (c.z[i] - p);
  return std::imag(acc) / two_pi;
}

inline double min_node_distance(const std::vector<DenseCurve>& curves, cx p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : curves)
    for (cx z : c.z) d = std::min(d, std::abs(z - p));
  return d;
}

}  // namespace detail

// A finitely connected domain: one outer curve plus disjoint hole curves.
// Holes are supplied counterclockwise (the authoring convention) and stored
// reversed, so that internally the full boundary carries the standard
// orientation: the domain lies to the left of every curve.
class Domain {
 public:
  Domain(Curve outer, std::vector<Curve> holes_ccw, std::vector<cx> anchors)
      : outer_(std::move(outer)), anchors_(std::move(anchors)) {
    if (holes_ccw.size() != anchors_.size())
      fail(errc::invalid_domain, "each hole curve needs one anchor point");
    holes_.reserve(holes_ccw.size());
    for (auto& h : holes_ccw) holes_.push_back(h.reversed());
    validate_and_cache();
  }

  const Curve& outer() const { return outer_; }
  const std::vector<Curve>& holes() const { return holes_; }  // clockwise
  const std::vector<cx>& hole_anchors() const { return anchors_; }
  const Curve& curve(int j) const { return j == 0 ? outer_ : holes_[j - 1]; }
  int curve_count() const { return 1 + static_cast<int>(holes_.size()); }
  int connectivity() const { return curve_count(); }

  double diameter() const { return diameter_; }
  double epsilon_geom() const { return 1e-8 * diameter_; }

  // Distance to the boundary, measured against a dense reference sampling.
  double boundary_distance(cx p) const {
    return detail::min_node_distance(dense_, p);
  }

  // Winding-number membership test.  Total winding of the oriented boundary
  // rounds to 1 inside the domain, 0 in holes and outside.
  bool contains(cx p) const {
    double d = boundary_distance(p);
    if (d < epsilon_geom())
      fail(errc::boundary_proximity, "point too close to the boundary");
    double w = detail::winding_sum(dense_, p);
    if (std::abs(w - std::round(w)) > 0.25 || d < 8.0 * dense_spacing_) {
      w = detail::winding_sum(dense_fine_, p);
      if (std::abs(w - std::round(w)) > 0.25)
        fail(errc::boundary_proximity,
             "winding number unresolved this close to the boundary");
    }
    return std::lround(w) == 1;
  }

 private:
  void validate_and_cache() {
    if (outer_.signed_area() <= 0.0)
      fail(errc::invalid_domain, "outer curve must be counterclockwise");
    for (std::size_t j = 0; j < holes_.size(); ++j)
      if (holes_[j].signed_area() >= 0.0)
        fail(errc::invalid_domain,
             "hole curve " + std::to_string(j + 1) +
                 " must be counterclockwise in the input");

    const int nv = 512;
    dense_.push_back(detail::densify(outer_, nv));
    for (const auto& h : holes_) dense_.push_back(detail::densify(h, nv));
    dense_fine_.push_back(detail::densify(outer_, 4 * nv));
    for (const auto& h : holes_) dense_fine_.push_back(detail::densify(h, 4 * nv));

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (cx z : dense_[0].z) {
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
    diameter_ = std::hypot(xmax - xmin, ymax - ymin);
    if (!(diameter_ > 0.0))
      fail(errc::invalid_domain, "outer curve is degenerate");
    dense_spacing_ = 0.0;
    for (const auto& c : dense_)
      for (std::size_t i = 0; i < c.z.size(); ++i)
        dense_spacing_ = std::max(
            dense_spacing_, std::abs(c.z[(i + 1) % c.z.size()] - c.z[i]));

    const double eps = epsilon_geom();
    for (int j = 0; j < curve_count(); ++j) {
      const auto& d = dense_[j];
      for (std::size_t i = 0; i < d.z.size(); ++i)
        if (std::abs(d.dz[i]) * nv / two_pi < eps)
          fail(errc::degenerate_curve,
               "curve " + std::to_string(j) + " has vanishing velocity");
      // simple at validation resolution
      for (std::size_t i = 0; i < d.z.size(); ++i)
        for (std::size_t k = i + 1; k < d.z.size(); ++k)
          if (std::abs(d.z[i] - d.z[k]) < eps)
            fail(errc::invalid_domain,
                 "curve " + std::to_string(j) + " self-intersects");
    }
    // curves pairwise disjoint
    for (int j = 0; j < curve_count(); ++j)
      for (int k = j + 1; k < curve_count(); ++k)
        for (cx z : dense_[j].z)
          if (detail::min_node_distance({dense_[k]}, z) < eps)
            fail(errc::invalid_domain, "boundary curves intersect");
    // holes strictly inside the outer curve
    for (std::size_t j = 0; j < holes_.size(); ++j)
      for (cx z : dense_[j + 1].z) {
        double w = detail::winding_sum({dense_[0]}, z);
        if (std::lround(w) != 1)
          fail(errc::invalid_domain,
               "hole " + std::to_string(j + 1) + " is not inside the outer curve");
      }
    // anchors: inside their own hole curve, hence outside the domain closure
    for (std::size_t j = 0; j < holes_.size(); ++j) {
      double w = detail::winding_sum({dense_[j + 1]}, anchors_[j]);
      if (std::lround(w) != -1)  // hole curves run clockwise internally
        fail(errc::invalid_domain,
             "anchor " + std::to_string(j + 1) + " is not inside its hole");
      double total = detail::winding_sum(dense_, anchors_[j]);
      if (std::lround(total) != 0)
        fail(errc::invalid_domain,
             "anchor " + std::to_string(j + 1) + " lies inside the domain");
    }
  }

  Curve outer_;
  std::vector<Curve> holes_;
  std::vector<cx> anchors_;
  std::vector<detail::DenseCurve> dense_, dense_fine_;
  double diameter_ = 0.0;
  double dense_spacing_ = 0.0;
};

// Quadrature nodes, unit tangents and arc-length weights on every boundary
// curve.  Equispaced in parameter, M nodes per curve; weights are trapezoid
// weights in t scaled by |z'|.
struct BoundaryGrid {
  std::vector<cx> nodes;
  std::vector<cx> tangents;  // |T| = 1, standard orientation
  std::vector<cx> dz;        // z'(t_i) * dt, the complex line element
  std::vector<double> weights;
  std::vector<double> params;
  std::vector<int> curve_index;
  int nodes_per_curve = 0;
  int curve_count = 0;
  double max_spacing = 0.0;
  std::vector<double> curve_spacing;  // max node spacing per curve

  int size() const { return static_cast<int>(nodes.size()); }

  double distance(cx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (cx n : nodes) d = std::min(d, std::abs(z - n));
    return d;
  }

  // Distance to each curve measured in units of that curve's node spacing;
  // the reach of boundary quadrature scales with this ratio.
  double clearance_ratio(cx z) const {
    double r = std::numeric_limits<double>::infinity();
    for (int c = 0; c < curve_count; ++c) {
      double d = std::numeric_limits<double>::infinity();
      auto [b, e] = curve_range(c);
      for (int i = b; i < e; ++i) d = std::min(d, std::abs(z - nodes[i]));
      r = std::min(r, d / curve_spacing[c]);
    }
    return r;
  }

  bool interior(cx z) const {
    cx acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += dz[i] / (nodes[i] - z);
    double w = std::imag(acc) / two_pi;
    return std::abs(w - std::round(w)) <= 0.25 && std::lround(w) == 1;
  }

  std::pair<int, int> curve_range(int c) const {
    return {c * nodes_per_curve, (c + 1) * nodes_per_curve};
  }
};

inline BoundaryGrid sample_boundary(const Domain& dom, int M) {
  if (M < 16 || M % 2 != 0)
    fail(errc::usage, "nodes per curve must be even and at least 16");
  BoundaryGrid g;
  g.nodes_per_curve = M;
  g.curve_count = dom.curve_count();
  const double dt = two_pi / M;
  for (int c = 0; c < dom.curve_count(); ++c) {
    const Curve& curve = dom.curve(c);
    for (int i = 0; i < M; ++i) {
      double t = dt * i;
      cx z = curve.point(t);
      cx v = curve.velocity(t);
      double speed = std::abs(v);
      if (speed < dom.epsilon_geom())
        fail(errc::degenerate_curve,
             "curve " + std::to_string(c) + " degenerate at node " +
                 std::to_string(i));
      g.nodes.push_back(z);
      g.tangents.push_back(v / speed);
      g.dz.push_back(v * dt);
      g.weights.push_back(speed * dt);
      g.params.push_back(t);
      g.curve_index.push_back(c);
    }
  }
  for (int c = 0; c < g.curve_count; ++c) {
    auto [b, e] = g.curve_range(c);
    double spacing = 0.0;
    for (int i = b; i < e; ++i) {
      int next = (i + 1 == e) ? b : i + 1;
      spacing = std::max(spacing, std::abs(g.nodes[next] - g.nodes[i]));
    }
    g.curve_spacing.push_back(spacing);
    g.max_spacing = std::max(g.max_spacing, spacing);
  }
  return g;
}

inline bool contains(const Domain& dom, cx p) { return dom.contains(p); }

// Catalog domains.
inline Domain builtin_domain(const std::string& name,
                             const std::vector<double>& params = {}) {
  auto circle = [](cx center, double radius) {
    // center + radius e^{it}
    return Curve({center, cx(radius, 0.0)}, 0);
  };
  if (name == "disc") {
    return Domain(circle(0.0, 1.0), {}, {});
  }
  if (name == "ellipse") {
    double b = params.empty() ? 0.6 : params[0];
    if (!(b > 0.0) || b > 1.0)
      fail(errc::invalid_domain, "ellipse semi-axis must be in (0,1]");
    // cos t + i b sin t
    return Domain(Curve({cx((1.0 - b) / 2, 0.0), cx(0.0, 0.0), cx((1.0 + b) / 2, 0.0)}, -1),
                  {}, {});
  }
  if (name == "annulus") {
    double rho = params.empty() ? 0.3 : params[0];
    if (!(rho > 0.0) || rho >= 1.0)
      fail(errc::invalid_domain, "annulus radius must be in (0,1)");
    return Domain(circle(0.0, 1.0), {circle(0.0, rho)}, {cx(0.0, 0.0)});
  }
  if (name == "three_connected") {
    double r = params.empty() ? 0.2 : params[0];
    double s = params.size() < 2 ? 0.5 : params[1];
    if (!(r > 0.0) || !(s > 0.0) || s + r >= 1.0 || r >= s)
      fail(errc::invalid_domain, "three_connected needs 0 < r < s, s + r < 1");
    return Domain(circle(0.0, 1.0),
                  {circle(cx(s, 0.0), r), circle(cx(-s, 0.0), r)},
                  {cx(s, 0.0), cx(-s, 0.0)});
  }
  fail(errc::unknown_domain, "unknown catalog domain: " + name);
}

}  // namespace geometry
}  // namespace szego
