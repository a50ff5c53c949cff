#pragma once

// Unweighted classical kernels S and L, the Ahlfors map f_a = S/L, zeros of
// S(., a) located by argument-principle counts plus Newton refinement, and
// Mobius post-composition to split multiple zeros.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "szego/errors.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"

namespace szego::classical {

using geometry::BoundaryGrid;
using geometry::Domain;
using hardy::BoundaryFunction;
using hardy::HardyBasis;

inline void require_unit_weight(const HardyBasis& basis, const char* who) {
  for (double v : basis.weight().samples)
    if (std::abs(v - 1.0) > 1e-14)
      fail(errc::usage,
           std::string(who) + ": classical kernels are the unit-weight case; "
                              "build the basis with the unit weight");
}

// Classical Szego kernel: the weighted kernel with unit weight.
inline BoundaryFunction szego_kernel(const HardyBasis& basis, cx a) {
  require_unit_weight(basis, "szego");
  return hardy::sigma(basis, a);
}

// Garabedian kernel from the boundary identity
//   (1/i) L(z,a) T(z) = conj(S(z,a)),   i.e.  L = i conj(S) conj(T),
// cross-checked against the orthogonal-decomposition route.
inline BoundaryFunction garabedian_kernel(const HardyBasis& basis, cx a) {
  require_unit_weight(basis, "garabedian");
  const BoundaryGrid& grid = basis.grid();
  BoundaryFunction s = hardy::sigma(basis, a);
  BoundaryFunction l;
  l.samples.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    l.samples[i] =
        cx(0.0, 1.0) * std::conj(s.samples[i]) * std::conj(grid.tangents[i]);
  l.singular_parts.push_back({a, 1, cx(1.0 / two_pi, 0.0)});

  // independent route: lambda with phi from the basis (runs the Hardy
  // membership test of the decomposition as a side effect)
  BoundaryFunction lw = hardy::weighted_garabedian(basis, a);
  double dev = 0.0, scale = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    dev = std::max(dev, std::abs(l.samples[i] - lw.samples[i]));
    scale = std::max(scale, std::abs(l.samples[i]));
  }
  if (dev > 1e-7 * (1.0 + scale))
    fail(errc::internal_consistency,
         "garabedian: identity route and decomposition route disagree by " +
             std::to_string(dev));
  return l;
}

// ---------------------------------------------------------------------------
// argument-principle machinery

namespace detail {

// Winding number of g along the closed polyline through pts, by summing
// phase increments with adaptive bisection of segments.
template <typename F>
int phase_winding(F&& g, const std::vector<cx>& pts) {
  struct Rec {
    const std::function<cx(cx)>& f;
    double floor;
    double walk(cx z0, cx z1, cx v0, cx v1, int depth) const {
      double d = std::arg(v1 / v0);
      if (std::abs(d) <= 1.5) return d;
      if (depth >= 26)
        fail(errc::zero_count_mismatch,
             "argument principle: phase unresolved (zero on the contour?)");
      cx zm = 0.5 * (z0 + z1);
      cx vm = f(zm);
      if (std::abs(vm) < floor)
        fail(errc::zero_count_mismatch,
             "argument principle: contour passes through a zero");
      return walk(z0, zm, v0, vm, depth + 1) + walk(zm, z1, vm, v1, depth + 1);
    }
  };
  std::function<cx(cx)> f = std::forward<F>(g);
  std::vector<cx> vals(pts.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    scale = std::max(scale, std::abs(vals[i]));
  }
  if (scale == 0.0)
    fail(errc::zero_count_mismatch, "argument principle: function vanishes on contour");
  Rec rec{f, 1e-13 * scale};
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cx z0 = pts[i], z1 = pts[(i + 1) % pts.size()];
    cx v0 = vals[i], v1 = vals[(i + 1) % pts.size()];
    if (std::abs(v0) < rec.floor || std::abs(v1) < rec.floor)
      fail(errc::zero_count_mismatch,
           "argument principle: contour passes through a zero");
    total += rec.walk(z0, z1, v0, v1, 0);
  }
  double w = total / two_pi;
  if (std::abs(w - std::round(w)) > 0.25)
    fail(errc::zero_count_mismatch, "argument principle: winding did not close up");
  return static_cast<int>(std::lround(w));
}

inline std::vector<cx> rectangle_contour(cx lo, cx hi, int per_edge) {
  std::vector<cx> pts;
  double w = hi.real() - lo.real(), h = hi.imag() - lo.imag();
  for (int i = 0; i < per_edge; ++i)
    pts.emplace_back(lo.real() + w * i / per_edge, lo.imag());
  for (int i = 0; i < per_edge; ++i)
    pts.emplace_back(hi.real(), lo.imag() + h * i / per_edge);
  for (int i = 0; i < per_edge; ++i)
    pts.emplace_back(hi.real() - w * i / per_edge, hi.imag());
  for (int i = 0; i < per_edge; ++i)
    pts.emplace_back(lo.real(), hi.imag() - h * i / per_edge);
  return pts;
}

inline std::vector<cx> circle_contour(cx center, double r, int count) {
  std::vector<cx> pts;
  for (int i = 0; i < count; ++i)
    pts.push_back(center + std::polar(r, two_pi * i / count));
  return pts;
}

// All contour points interior with Cauchy clearance (a margin above the
// evaluator's own threshold, so evaluations inside never throw).
inline bool contour_safe(const BoundaryGrid& grid, const std::vector<cx>& pts) {
  for (cx p : pts) {
    if (grid.clearance_ratio(p) < hardy::cauchy_clearance_ratio + 0.5) return false;
    if (!grid.interior(p)) return false;
  }
  return true;
}

}  // namespace detail

// Winding of boundary samples of f around 0 (the argument-principle count of
// zeros of f in the domain when f has no poles).
inline int boundary_winding(const BoundaryGrid& grid, const BoundaryFunction& f) {
  hardy::require_same_grid(grid, f);
  double total = 0.0;
  for (int c = 0; c < grid.curve_count; ++c) {
    auto [b, e] = grid.curve_range(c);
    for (int i = b; i < e; ++i) {
      int next = (i + 1 == e) ? b : i + 1;
      cx ratio = f.samples[next] / f.samples[i];
      double d = std::arg(ratio);
      if (std::abs(d) > 2.5)
        fail(errc::zero_count_mismatch,
             "boundary winding under-resolved; increase the node count");
      total += d;
    }
  }
  double w = total / two_pi;
  if (std::abs(w - std::round(w)) > 0.25)
    fail(errc::zero_count_mismatch, "boundary winding did not close up");
  return static_cast<int>(std::lround(w));
}

struct LocatedZero {
  cx location;
  int multiplicity = 1;
};

struct ZeroSearchOptions {
  int expected = -1;           // throw unless this many are found (with mult.)
  double separation = 0.0;     // dedup / simplicity radius (default from grid)
  double min_cell = 0.0;       // stop subdividing below this size
  int max_depth = 11;
};

// Zeros of the interior extension of g, by quadtree subdivision of the node
// bounding box with an argument-principle count per cell, then Newton
// refinement through the Cauchy evaluator.
inline std::vector<LocatedZero> locate_interior_zeros(const BoundaryGrid& grid,
                                                      const BoundaryFunction& g,
                                                      ZeroSearchOptions opt = {}) {
  hardy::require_same_grid(grid, g);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (cx z : grid.nodes) {
    xmin = std::min(xmin, z.real()), xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag()), ymax = std::max(ymax, z.imag());
  }
  double diam = std::hypot(xmax - xmin, ymax - ymin);
  if (opt.separation <= 0.0) opt.separation = 1e-4 * diam;
  if (opt.min_cell <= 0.0) opt.min_cell = std::max(1e-3 * diam, opt.separation);

  auto eval = [&](cx z) { return hardy::cauchy_interior_eval(grid, g, z); };
  auto deriv = [&](cx z) { return hardy::cauchy_interior_derivative(grid, g, z, 1); };

  double gscale = 0.0;
  for (cx v : g.samples) gscale = std::max(gscale, std::abs(v));
  if (gscale == 0.0) fail(errc::zero_count_mismatch, "function is identically zero");

  auto newton = [&](cx z0, int mult, cx lo, cx hi) -> std::optional<cx> {
    cx z = z0;
    double span = std::abs(hi - lo);
    for (int it = 0; it < 80; ++it) {
      cx gz, dz;
      try {
        gz = eval(z);
        dz = deriv(z);
      } catch (const Error&) {
        return std::nullopt;
      }
      if (std::abs(dz) == 0.0) return std::nullopt;
      cx step = static_cast<double>(mult) * gz / dz;
      z -= step;
      if (std::abs(z - z0) > 4.0 * span) return std::nullopt;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    cx gz;
    try {
      gz = eval(z);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (std::abs(gz) > 1e-9 * gscale) return std::nullopt;
    return z;
  };

  std::vector<LocatedZero> found;
  auto record = [&](cx z, int mult) {
    for (auto& f : found)
      if (std::abs(f.location - z) < opt.separation) {
        f.multiplicity = std::max(f.multiplicity, mult);
        return;
      }
    found.push_back({z, mult});
  };

  struct Cell {
    cx lo, hi;
    int depth;
  };
  const double safe_strip =
      (hardy::cauchy_clearance_ratio + 1.0) * grid.max_spacing;
  std::vector<Cell> stack{{cx(xmin, ymin), cx(xmax, ymax), 0}};
  bool uncovered = false;
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    double size = std::max(c.hi.real() - c.lo.real(), c.hi.imag() - c.lo.imag());
    cx center = 0.5 * (c.lo + c.hi);
    double circumradius = 0.5 * std::abs(c.hi - c.lo);
    auto subdivide = [&]() {
      cx mid = 0.5 * (c.lo + c.hi);
      stack.push_back({c.lo, mid, c.depth + 1});
      stack.push_back({cx(mid.real(), c.lo.imag()), cx(c.hi.real(), mid.imag()), c.depth + 1});
      stack.push_back({cx(c.lo.real(), mid.imag()), cx(mid.real(), c.hi.imag()), c.depth + 1});
      stack.push_back({mid, c.hi, c.depth + 1});
    };

    // Distance pruning: a cell separated from the boundary lies entirely on
    // one side of it.
    double center_dist = grid.distance(center);
    bool center_inside = grid.interior(center);
    if (center_dist > circumradius + safe_strip && !center_inside) continue;
    bool safe = center_dist > circumradius + safe_strip && center_inside;

    int per_edge = std::clamp(static_cast<int>(2.0 * size / grid.max_spacing), 6, 48);
    auto contour = detail::rectangle_contour(c.lo, c.hi, per_edge);
    if (!safe) safe = detail::contour_safe(grid, contour);
    if (!safe) {
      // an unsafe cell below the width of the clearance strip of the finest
      // curve cannot become safe by subdividing; the Newton fallback owns
      // that territory
      double floor_size =
          0.5 * (hardy::cauchy_clearance_ratio + 1.0) *
          *std::min_element(grid.curve_spacing.begin(), grid.curve_spacing.end());
      if (c.depth < opt.max_depth && size > floor_size)
        subdivide();
      else
        uncovered = true;
      continue;
    }
    int count;
    try {
      count = detail::phase_winding(eval, contour);
    } catch (const Error&) {
      // zero on (or hugging) the contour: enlarge slightly and retry once
      cx pad = 0.031 * (c.hi - c.lo);
      auto contour2 = detail::rectangle_contour(c.lo - pad, c.hi + pad, per_edge);
      if (!detail::contour_safe(grid, contour2)) {
        if (c.depth < opt.max_depth) subdivide();
        else uncovered = true;
        continue;
      }
      try {
        count = detail::phase_winding(eval, contour2);
      } catch (const Error&) {
        if (c.depth < opt.max_depth) subdivide();
        else uncovered = true;
        continue;
      }
    }
    if (count == 0) continue;
    if (count < 0)
      fail(errc::zero_count_mismatch, "negative cell winding; inputs inconsistent");
    if ((count == 1 || size <= opt.min_cell)) {
      cx center = 0.5 * (c.lo + c.hi);
      auto z = newton(center, count, c.lo, c.hi);
      if (!z && count == 1 && c.depth < opt.max_depth && size > opt.min_cell) {
        subdivide();
        continue;
      }
      if (!z)
        fail(errc::zero_count_mismatch,
             "Newton refinement failed in a cell with nonzero count");
      record(*z, count);
      continue;
    }
    if (c.depth < opt.max_depth) subdivide();
    else record(0.5 * (c.lo + c.hi), count);  // unresolved cluster
  }

  int total = 0;
  for (const auto& f : found) total += f.multiplicity;

  // Zeros inside the clearance strip cannot be boxed by countable cells.
  // Newton launched from inward offsets of the boundary nodes still reaches
  // them, and a small certification circle around each root restores the
  // argument-principle guarantee.
  if (opt.expected >= 0 && total != opt.expected) {
    std::vector<cx> roots;
    for (int c = 0; c < grid.curve_count; ++c) {
      auto [b, e] = grid.curve_range(c);
      int stride = std::max(1, grid.nodes_per_curve / 48);
      for (int i = b; i < e; i += stride)
        for (double ratio : {6.0, 9.0, 13.0}) {
          cx start = grid.nodes[i] +
                     cx(0.0, 1.0) * grid.tangents[i] * (ratio * grid.curve_spacing[c]);
          if (!grid.interior(start)) continue;
          if (grid.clearance_ratio(start) < hardy::cauchy_clearance_ratio + 0.2)
            continue;
          auto z = newton(start, 1, start - 0.2 * diam, start + 0.2 * diam);
          if (!z) continue;
          bool known = false;
          for (const auto& f : found)
            if (std::abs(f.location - *z) < opt.separation) known = true;
          for (cx r : roots)
            if (std::abs(r - *z) < opt.separation) known = true;
          if (!known) roots.push_back(*z);
        }
    }
    for (cx r : roots) {
      double allowed = 1e300;
      for (int c = 0; c < grid.curve_count; ++c) {
        double d = 1e300;
        auto [b, e] = grid.curve_range(c);
        for (int i = b; i < e; ++i) d = std::min(d, std::abs(r - grid.nodes[i]));
        allowed = std::min(
            allowed, d - (hardy::cauchy_clearance_ratio + 0.05) * grid.curve_spacing[c]);
      }
      for (const auto& f : found)
        allowed = std::min(allowed, 0.45 * std::abs(f.location - r));
      for (cx other : roots)
        if (other != r) allowed = std::min(allowed, 0.45 * std::abs(other - r));
      double radius = std::min(0.9 * allowed, 0.02 * diam);
      if (radius <= 0.0) continue;
      int mult;
      try {
        mult = detail::phase_winding(eval, detail::circle_contour(r, radius, 24));
      } catch (const Error&) {
        continue;
      }
      if (mult >= 1) {
        record(r, mult);
        total += mult;
      }
    }
  }

  if (opt.expected >= 0 && total != opt.expected)
    fail(errc::zero_count_mismatch,
         "expected " + std::to_string(opt.expected) + " zeros, located " +
             std::to_string(total) +
             (uncovered ? " (parts of the domain were unreachable; "
                          "increase the node count or move the base point)"
                        : ""));
  std::sort(found.begin(), found.end(), [](const LocatedZero& a, const LocatedZero& b) {
    if (a.location.real() != b.location.real())
      return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return found;
}

// The n-1 zeros of S(., a), counted with multiplicity.
inline std::vector<cx> szego_zeros(const Domain& domain, const HardyBasis& basis,
                                   cx a) {
  require_unit_weight(basis, "szego_zeros");
  BoundaryFunction s = hardy::sigma(basis, a);
  ZeroSearchOptions opt;
  opt.expected = domain.connectivity() - 1;
  opt.separation = 1e-4 * domain.diameter();
  auto zeros = locate_interior_zeros(basis.grid(), s, opt);
  std::vector<cx> out;
  for (const auto& z : zeros)
    for (int k = 0; k < z.multiplicity; ++k) out.push_back(z.location);
  return out;
}

struct AhlforsMap {
  cx base;
  BoundaryFunction szego;       // S(., a)
  BoundaryFunction garabedian;  // L(., a)
  BoundaryFunction boundary;    // f = S/L, |f| = 1 on the boundary
  std::vector<cx> zeros;        // a plus the n-1 zeros of S(., a)
  cx derivative_at_base;        // = 2 pi S(a,a)
};

inline AhlforsMap ahlfors(const Domain& domain, const HardyBasis& basis, cx a) {
  require_unit_weight(basis, "ahlfors");
  const BoundaryGrid& grid = basis.grid();
  AhlforsMap m;
  m.base = a;
  m.szego = hardy::sigma(basis, a);
  m.garabedian = garabedian_kernel(basis, a);
  m.boundary.samples.resize(grid.size());
  double min_l = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.size(); ++i) min_l = std::min(min_l, std::abs(m.garabedian.samples[i]));
  if (min_l == 0.0)
    fail(errc::internal_consistency, "Garabedian kernel vanished on the boundary");
  double modulus_dev = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    m.boundary.samples[i] = m.szego.samples[i] / m.garabedian.samples[i];
    modulus_dev = std::max(modulus_dev, std::abs(std::abs(m.boundary.samples[i]) - 1.0));
  }
  if (modulus_dev > 1e-6)
    fail(errc::internal_consistency,
         "Ahlfors map boundary modulus deviates by " + std::to_string(modulus_dev));

  m.zeros.push_back(a);
  for (cx z : szego_zeros(domain, basis, a)) m.zeros.push_back(z);

  m.derivative_at_base = hardy::cauchy_interior_derivative(grid, m.boundary, a, 1);
  double s_aa = std::real(hardy::sigma_point(basis, a, a));
  if (std::abs(m.derivative_at_base - two_pi * s_aa) > 1e-6 * (1.0 + two_pi * s_aa) ||
      m.derivative_at_base.real() <= 0.0)
    fail(errc::internal_consistency,
         "Ahlfors normalization f'(a) = 2 pi S(a,a) violated");
  return m;
}

// A proper holomorphic map onto the unit disc, held as boundary samples with
// its certified zero set.
struct ProperMap {
  BoundaryFunction boundary;
  std::vector<cx> zeros;  // distinct locations
  std::vector<int> multiplicities;

  int degree() const {
    int d = 0;
    for (int m : multiplicities) d += m;
    return d;
  }
  bool simple() const {
    for (int m : multiplicities)
      if (m != 1) return false;
    return true;
  }
};

inline ProperMap to_proper_map(const AhlforsMap& m, double separation) {
  ProperMap p;
  p.boundary = m.boundary;
  for (cx z : m.zeros) {
    bool merged = false;
    for (std::size_t i = 0; i < p.zeros.size(); ++i)
      if (std::abs(p.zeros[i] - z) < separation) {
        ++p.multiplicities[i];
        merged = true;
        break;
      }
    if (!merged) {
      p.zeros.push_back(z);
      p.multiplicities.push_back(1);
    }
  }
  return p;
}

// Compose with a disc automorphism (f - b)/(1 - conj(b) f) until the zero
// set consists of certified simple zeros.
inline ProperMap mobius_simplify(const Domain& domain, const BoundaryGrid& grid,
                                 const ProperMap& map) {
  const double eps_zero = 1e-4 * domain.diameter();
  int degree = map.degree();
  {
    int wind = boundary_winding(grid, map.boundary);
    if (wind != degree)
      fail(errc::internal_consistency,
           "proper map degree and zero multiplicities disagree");
  }
  auto attempt = [&](cx beta) -> std::optional<ProperMap> {
    BoundaryFunction g;  // f - beta: zeros of the composed map solve f = beta
    g.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) g.samples[i] = map.boundary.samples[i] - beta;
    ZeroSearchOptions opt;
    opt.expected = degree;
    opt.separation = eps_zero;
    std::vector<LocatedZero> zeros;
    try {
      zeros = locate_interior_zeros(grid, g, opt);
    } catch (const Error&) {
      return std::nullopt;
    }
    for (const auto& z : zeros)
      if (z.multiplicity != 1) return std::nullopt;
    for (std::size_t i = 0; i < zeros.size(); ++i)
      for (std::size_t j = i + 1; j < zeros.size(); ++j)
        if (std::abs(zeros[i].location - zeros[j].location) <= eps_zero)
          return std::nullopt;
    for (const auto& z : zeros) {
      cx d = hardy::cauchy_interior_derivative(grid, map.boundary, z.location, 1);
      if (std::abs(d) <= 1e-10) return std::nullopt;
    }
    ProperMap out;
    out.boundary.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      cx f = map.boundary.samples[i];
      out.boundary.samples[i] = (f - beta) / (1.0 - std::conj(beta) * f);
    }
    for (const auto& z : zeros) {
      out.zeros.push_back(z.location);
      out.multiplicities.push_back(1);
    }
    return out;
  };

  if (map.simple()) {
    bool separated = true;
    for (std::size_t i = 0; i < map.zeros.size() && separated; ++i)
      for (std::size_t j = i + 1; j < map.zeros.size(); ++j)
        if (std::abs(map.zeros[i] - map.zeros[j]) <= eps_zero) separated = false;
    if (separated) return map;  // beta = 0 accepted
  }
  for (double r : {0.1, 0.2, 0.3, 0.4})
    for (int k = 0; k < 8; ++k) {
      cx beta = std::polar(r, two_pi * k / 8 + 0.37);
      if (auto out = attempt(beta)) return *out;
    }
  fail(errc::degenerate_zeros,
       "no Mobius composition with simple zeros found in the search grid");
}

}  // namespace szego::classical
