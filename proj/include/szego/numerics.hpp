#pragma once

// Dense complex linear algebra: pivoted LU solve, stabilized
// orthonormalization with a drop tolerance, and smallest-singular-pair
// extraction by inverse iteration on the normal equations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "szego/errors.hpp"

namespace szego::numerics {

using cx = std::complex<double>;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, cx fill = cx(0.0, 0.0))
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}
  DenseMatrix(int rows, int cols, std::vector<cx> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(rows) * cols)
      fail(errc::usage, "matrix entry count does not match shape");
    for (cx v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        fail(errc::usage, "matrix has non-finite entries");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  cx operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::vector<cx> matvec(const std::vector<cx>& x) const {
    std::vector<cx> y(rows_, cx(0.0, 0.0));
    for (int i = 0; i < rows_; ++i) {
      cx acc = 0.0;
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  std::vector<cx> adjoint_matvec(const std::vector<cx>& x) const {
    std::vector<cx> y(cols_, cx(0.0, 0.0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) y[j] += std::conj((*this)(i, j)) * x[i];
    return y;
  }

  DenseMatrix multiply(const DenseMatrix& b) const {
    DenseMatrix r(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        cx aik = (*this)(i, k);
        if (aik == cx(0.0, 0.0)) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cx> a_;
};

inline double norm2(const std::vector<cx>& v) {
  double acc = 0.0;
  for (cx x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

// LU factorization with partial pivoting.
class LuFactorization {
 public:
  LuFactorization(DenseMatrix a, double pivot_tol) : lu_(std::move(a)) {
    const int n = lu_.rows();
    if (n != lu_.cols()) fail(errc::usage, "lu_factor requires a square matrix");
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (p != k) {
        std::swap(perm_[p], perm_[k]);
        for (int j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
      }
      double piv = std::abs(lu_(k, k));
      min_pivot_ = std::min(min_pivot_, piv);
      max_pivot_ = std::max(max_pivot_, piv);
      if (piv == 0.0 || min_pivot_ < pivot_tol * max_pivot_)
        fail(errc::singular_matrix,
             "matrix singular to tolerance, pivot magnitude " +
                 std::to_string(piv));
      cx inv = 1.0 / lu_(k, k);
      for (int i = k + 1; i < n; ++i) {
        cx m = lu_(i, k) * inv;
        lu_(i, k) = m;
        if (m == cx(0.0, 0.0)) continue;
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  std::vector<cx> solve(const std::vector<cx>& b) const {
    const int n = lu_.rows();
    if (static_cast<int>(b.size()) != n)
      fail(errc::usage, "right-hand side length mismatch");
    std::vector<cx> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (int i = 1; i < n; ++i) {
      cx acc = x[i];
      for (int j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc;
    }
    for (int i = n - 1; i >= 0; --i) {
      cx acc = x[i];
      for (int j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc / lu_(i, i);
    }
    return x;
  }

  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }

 private:
  DenseMatrix lu_;
  std::vector<int> perm_;
  double min_pivot_ = std::numeric_limits<double>::infinity();
  double max_pivot_ = 0.0;
};

inline constexpr double default_solver_eps = 1e-13;

inline std::vector<cx> solve(const DenseMatrix& a, const std::vector<cx>& b,
                             double pivot_tol = default_solver_eps) {
  return LuFactorization(a, pivot_tol).solve(b);
}

using InnerProduct =
    std::function<cx(const std::vector<cx>&, const std::vector<cx>&)>;

// Result of modified Gram-Schmidt with one reorthogonalization pass.
// vectors[q] = sum_j transform(j, q) * span[j]; retained vectors keep the
// input order, dropped records the indices removed by the drop tolerance.
struct OrthoSet {
  std::vector<std::vector<cx>> vectors;
  DenseMatrix transform;
  std::vector<int> kept;
  std::vector<int> dropped;
};

inline OrthoSet orthonormalize(const std::vector<std::vector<cx>>& span,
                               const InnerProduct& inner, double drop_tol) {
  if (drop_tol <= 0.0) fail(errc::usage, "drop tolerance must be positive");
  OrthoSet out;
  const int m = static_cast<int>(span.size());
  std::vector<std::vector<cx>> coeffs;  // over the original span
  for (int j = 0; j < m; ++j) {
    if (!span[j].empty() && span[j].size() != span[0].size())
      fail(errc::grid_mismatch, "span vectors have unequal lengths");
    std::vector<cx> v = span[j];
    std::vector<cx> c(m, cx(0.0, 0.0));
    c[j] = 1.0;
    double norm0 = std::sqrt(std::abs(std::real(inner(v, v))));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < out.vectors.size(); ++q) {
        cx r = inner(v, out.vectors[q]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= r * out.vectors[q][i];
        for (int i = 0; i < m; ++i) c[i] -= r * coeffs[q][i];
      }
    }
    double norm = std::sqrt(std::abs(std::real(inner(v, v))));
    if (norm <= drop_tol * norm0 || norm == 0.0) {
      out.dropped.push_back(j);
      continue;
    }
    for (auto& x : v) x /= norm;
    for (auto& x : c) x /= norm;
    out.vectors.push_back(std::move(v));
    coeffs.push_back(std::move(c));
    out.kept.push_back(j);
  }
  out.transform = DenseMatrix(m, static_cast<int>(out.vectors.size()));
  for (std::size_t q = 0; q < coeffs.size(); ++q)
    for (int j = 0; j < m; ++j) out.transform(j, static_cast<int>(q)) = coeffs[q][j];
  return out;
}

struct MinSingular {
  double value = 0.0;
  std::vector<cx> direction;
  int iterations = 0;
};

namespace detail {

// Deterministic start vector (xorshift64).
inline std::vector<cx> seeded_unit_vector(int n, std::uint64_t seed) {
  std::vector<cx> v(n);
  std::uint64_t s = seed;
  auto next = [&s]() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  };
  for (auto& x : v) x = cx(next(), next());
  double nv = norm2(v);
  for (auto& x : v) x /= nv;
  return v;
}

}  // namespace detail

// Smallest singular value and right singular direction of A (rows >= cols),
// by shifted inverse iteration on A^H A.  Accuracy target is 1e-3 relative
// on the value; the direction phase is normalized so the largest component
// is real positive.
inline MinSingular min_singular_direction(const DenseMatrix& a,
                                          int max_iterations = 400) {
  const int n = a.cols();
  if (a.rows() < n) fail(errc::usage, "min_singular_direction needs rows >= cols");
  DenseMatrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cx acc = 0.0;
      for (int k = 0; k < a.rows(); ++k) acc += std::conj(a(k, i)) * a(k, j);
      b(i, j) = acc;
    }
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(b(i, i)));
  if (scale == 0.0) return {0.0, detail::seeded_unit_vector(n, 2), 0};

  MinSingular best;
  best.value = std::numeric_limits<double>::infinity();
  double shift = 1e-15 * scale;
  for (int attempt = 0; attempt < 4; ++attempt, shift *= 1e3) {
    DenseMatrix bs = b;
    for (int i = 0; i < n; ++i) bs(i, i) += shift;
    try {
      LuFactorization lu(std::move(bs), 0.0);
      std::vector<cx> v = detail::seeded_unit_vector(n, 0x9E3779B97F4A7C15ull + attempt);
      double prev = std::numeric_limits<double>::infinity();
      for (int it = 1; it <= max_iterations; ++it) {
        std::vector<cx> w = lu.solve(v);
        double nw = norm2(w);
        if (!std::isfinite(nw) || nw == 0.0) break;
        for (auto& x : w) x /= nw;
        v = std::move(w);
        double val = norm2(a.matvec(v));
        if (val < best.value) {
          best.value = val;
          best.direction = v;
          best.iterations = it;
        }
        if (std::abs(val - prev) <= 1e-4 * val + 1e-14 * std::sqrt(scale)) {
          // normalize phase: largest component real positive
          int imax = 0;
          for (int i = 1; i < n; ++i)
            if (std::abs(best.direction[i]) > std::abs(best.direction[imax])) imax = i;
          cx ph = best.direction[imax] / std::abs(best.direction[imax]);
          for (auto& x : best.direction) x /= ph;
          return best;
        }
        prev = val;
      }
    } catch (const Error&) {
      continue;  // singular even with shift; retry with a larger one
    }
  }
  if (!best.direction.empty()) {
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(best.direction[i]) > std::abs(best.direction[imax])) imax = i;
    cx ph = best.direction[imax] / std::abs(best.direction[imax]);
    for (auto& x : best.direction) x /= ph;
    Error err(errc::convergence_failure,
              "inverse iteration did not converge; best value " +
                  std::to_string(best.value));
    throw err;
  }
  fail(errc::convergence_failure, "inverse iteration failed to produce an estimate");
}

}  // namespace szego::numerics
