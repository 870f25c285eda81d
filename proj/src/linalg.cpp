#include "asyscd/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>

#include "asyscd/prng.hpp"

namespace asyscd::linalg {

LuFactor::LuFactor(std::size_t n, Vec matrix) : n_(n), lu_(std::move(matrix)), perm_(n) {
  if (lu_.size() != n * n) throw std::invalid_argument("LuFactor: matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  double scale = 0.0;
  for (double v : lu_) scale = std::max(scale, std::abs(v));
  const double tiny = scale * 1e-14 + 1e-300;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(lu_[r * n + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= tiny) throw std::runtime_error("LuFactor: matrix is numerically singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[piv * n + j]);
      std::swap(perm_[k], perm_[piv]);
    }
    const double d = lu_[k * n + k];
    for (std::size_t r = k + 1; r < n; ++r) {
      const double m = lu_[r * n + k] / d;
      lu_[r * n + k] = m;
      for (std::size_t j = k + 1; j < n; ++j) lu_[r * n + j] -= m * lu_[k * n + j];
    }
  }
}

Vec LuFactor::solve(Vec rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("LuFactor::solve: rhs size mismatch");
  Vec x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 1; i < n_; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_[i * n_ + j] * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n_; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double s = x[i];
    for (std::size_t j = i + 1; j < n_; ++j) s -= lu_[i * n_ + j] * x[j];
    x[i] = s / lu_[i * n_ + i];
  }
  return x;
}

Vec dense_solve(std::size_t n, Vec matrix, Vec rhs) {
  return LuFactor(n, std::move(matrix)).solve(std::move(rhs));
}

namespace {

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void matvec(std::size_t n, const Vec& a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = a.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

}  // namespace

double power_iteration(std::size_t n, const Vec& matrix, int max_iters, double tol,
                       unsigned long long seed) {
  Vec x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng::uniform01(seed, i) + 0.5;
  double nx = norm2(x);
  for (double& v : x) v /= nx;
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    matvec(n, matrix, x, y);
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    double next = 0.0;
    for (std::size_t i = 0; i < n; ++i) next += x[i] * y[i];
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

double smallest_eigenvalue(std::size_t n, const Vec& matrix, int max_iters, double tol) {
  std::optional<LuFactor> lu;
  try {
    lu.emplace(n, matrix);
  } catch (const std::runtime_error&) {
    return 0.0;
  }
  Vec x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng::uniform01(98765, i) + 0.5;
  double nx = norm2(x);
  for (double& v : x) v /= nx;
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    y = lu->solve(x);
    const double ny = norm2(y);
    if (ny == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    // Rayleigh quotient with the original matrix.
    matvec(n, matrix, x, y);
    double next = 0.0;
    for (std::size_t i = 0; i < n; ++i) next += x[i] * y[i];
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::max(lambda, 0.0);
}

}  // namespace asyscd::linalg
