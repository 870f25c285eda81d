#pragma once

#include <cstddef>
#include <vector>

// Small dense helpers for oracles and diagnostics. Matrices are row-major.

namespace asyscd::linalg {

using Vec = std::vector<double>;

// LU factorization with partial pivoting, kept for repeated solves.
class LuFactor {
 public:
  // Throws std::runtime_error if a pivot is (numerically) zero.
  LuFactor(std::size_t n, Vec matrix);
  Vec solve(Vec rhs) const;
  std::size_t dim() const { return n_; }

 private:
  std::size_t n_;
  Vec lu_;
  std::vector<std::size_t> perm_;
};

// Solves A x = b by Gaussian elimination (A row-major, n x n).
Vec dense_solve(std::size_t n, Vec matrix, Vec rhs);

// Largest eigenvalue of symmetric PSD A by power iteration.
double power_iteration(std::size_t n, const Vec& matrix, int max_iters = 200,
                       double tol = 1e-6, unsigned long long seed = 12345);

// Smallest eigenvalue of symmetric PD A by inverse power iteration.
// Returns 0 if the matrix is numerically singular.
double smallest_eigenvalue(std::size_t n, const Vec& matrix, int max_iters = 200,
                           double tol = 1e-10);

}  // namespace asyscd::linalg
