#pragma once

// Closed-form and brute-force reference values used as independent oracles.
// Everything here stays independent of the implementation paths it checks:
// the oracles work from curve parameterizations and classical series only.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "szego/geometry.hpp"

namespace oracle {

using szego::cx;
using szego::two_pi;

// --- disc kernels ----------------------------------------------------------

inline cx disc_szego(cx z, cx w) { return 1.0 / (two_pi * (1.0 - z * std::conj(w))); }
inline cx disc_garabedian(cx z, cx a) { return 1.0 / (two_pi * (z - a)); }
inline cx disc_bergman(cx z, cx w) {
  cx d = 1.0 - z * std::conj(w);
  return 1.0 / (std::numbers::pi * d * d);
}
inline cx disc_lambda(cx z, cx w) {
  cx d = z - w;
  return 1.0 / (std::numbers::pi * d * d);
}
inline double disc_green(cx z, cx w) {
  return -std::log(std::abs((z - w) / (1.0 - z * std::conj(w))));
}
inline cx disc_ahlfors(cx z, cx a) { return (z - a) / (1.0 - std::conj(a) * z); }
inline double disc_poisson(cx a, cx z) {  // |z| = 1
  return (1.0 - std::norm(a)) / (two_pi * std::norm(z - a));
}

// --- annulus rho < |z| < 1 -------------------------------------------------

// Hardy-space Laurent expansion: ||z^n||^2 = 2 pi (1 + rho^{2n+1}).
inline cx annulus_szego(double rho, cx z, cx w, int terms = 400) {
  cx q = z * std::conj(w);
  cx acc = 0.0;
  for (int n = 0; n < terms; ++n) {
    cx t = std::pow(q, n) / (1.0 + std::pow(rho, 2 * n + 1));
    acc += t;
    if (n > 4 && std::abs(t) < 1e-18) break;
  }
  for (int n = 1; n < terms; ++n) {
    cx t = std::pow(q, -n) / (1.0 + std::pow(rho, -2 * n + 1));
    acc += t;
    if (n > 4 && std::abs(t) < 1e-18) break;
  }
  return acc / two_pi;
}

// Bergman-space Laurent expansion: ||z^n||^2 = 2 pi (1 - rho^{2n+2})/(2n+2),
// n != -1; ||z^{-1}||^2 = 2 pi log(1/rho).
inline cx annulus_bergman(double rho, cx z, cx w, int terms = 400) {
  cx q = z * std::conj(w);
  cx acc = 0.0;
  for (int n = -terms; n <= terms; ++n) {
    double nrm;
    if (n == -1)
      nrm = two_pi * std::log(1.0 / rho);
    else
      nrm = two_pi * (1.0 - std::pow(rho, 2 * n + 2)) / (2 * n + 2);
    acc += std::pow(q, n) / nrm;
  }
  return acc;
}

// separation of variables: boundary data 1 on |z| = rho, 0 on |z| = 1
inline double annulus_inner_measure(double rho, cx z) {
  return std::log(std::abs(z)) / std::log(rho);
}

// --- ray casting membership oracle ----------------------------------------

// Counts crossings of the rightward horizontal ray from p with the curve,
// by dense sampling plus bisection.  Independent of the winding-number path.
inline int ray_crossings(const szego::geometry::Curve& c, cx p, int samples = 4096) {
  int crossings = 0;
  double dt = two_pi / samples;
  auto g = [&](double t) { return std::imag(c.point(t)) - p.imag(); };
  double prev = g(0.0);
  for (int i = 1; i <= samples; ++i) {
    double t1 = dt * i;
    double cur = g(t1);
    if ((prev < 0.0 && cur >= 0.0) || (prev >= 0.0 && cur < 0.0)) {
      double a = dt * (i - 1), b = t1;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        if ((g(a) < 0.0) != (g(m) < 0.0))
          b = m;
        else
          a = m;
      }
      if (std::real(c.point(0.5 * (a + b))) > p.real()) ++crossings;
    }
    prev = cur;
  }
  return crossings;
}

inline bool ray_contains(const szego::geometry::Domain& dom, cx p) {
  // tiny irrational jitter so the ray never passes exactly through a
  // sampled curve point (the classic ray-casting degeneracy)
  cx q = p + cx(1.1080716354e-7, 2.5379306218e-7);
  int total = ray_crossings(dom.outer(), q);
  for (const auto& h : dom.holes()) total += ray_crossings(h, q);
  return total % 2 == 1;
}

// --- quadrature ------------------------------------------------------------

inline double refined_arc_length(const szego::geometry::Curve& c, int samples) {
  return c.length(samples);
}

}  // namespace oracle
