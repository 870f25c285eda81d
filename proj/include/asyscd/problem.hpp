#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace asyscd {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(const Vec& x, const char* what);

enum class RegionKind { Unconstrained, Box };

// Feasible set: all of R^n, or a product of closed intervals [lo_i, hi_i]
// (individual endpoints may be infinite).
struct FeasibleRegion {
  RegionKind kind = RegionKind::Unconstrained;
  Vec lower;  // size n when kind == Box
  Vec upper;

  static FeasibleRegion unconstrained() { return {}; }
  static FeasibleRegion box(Vec lo, Vec hi);
  static FeasibleRegion nonnegative(std::size_t n);
  static FeasibleRegion unit_box(std::size_t n);
  static FeasibleRegion uniform_box(std::size_t n, double lo, double hi);

  bool is_box() const { return kind == RegionKind::Box; }

  double clip(std::size_t i, double v) const {
    if (kind == RegionKind::Unconstrained) return v;
    const double lo = lower[i], hi = upper[i];
    return v < lo ? lo : (v > hi ? hi : v);
  }

  bool contains(const Vec& x, double tol = 0.0) const;
};

// Symmetric Hessian with two storage modes: CSR with sorted column indices
// (both triangles stored, so row i doubles as column i), or a dense
// row-major block for the degenerate fully-populated case.
class Hessian {
 public:
  static Hessian dense(std::size_t n, Vec values);
  static Hessian csr(std::size_t n, std::vector<std::size_t> row_ptr,
                     std::vector<std::uint32_t> cols, Vec vals);
  // Picks CSR or dense from the nonzero density of `values` (threshold 25%).
  static Hessian from_dense_auto(std::size_t n, const Vec& values);

  std::size_t dim() const { return n_; }
  bool is_dense() const { return dense_; }
  std::size_t stored_nonzeros() const;

  double diag(std::size_t i) const;
  double entry(std::size_t i, std::size_t j) const;

  // sum_j Q_ij x[j], accumulated left to right in storage order.
  double row_dot(std::size_t i, const double* x) const;
  // Euclidean norm of row i (== column i by symmetry).
  double row_norm(std::size_t i) const;
  // x^T Q x.
  double quad_form(const double* x) const;

  std::span<const double> dense_row(std::size_t i) const;
  std::span<const std::uint32_t> row_cols(std::size_t i) const;
  std::span<const double> row_vals(std::size_t i) const;

  template <class F>
  void visit_row(std::size_t i, F&& f) const {
    if (dense_) {
      const double* row = values_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (row[j] != 0.0) f(j, row[j]);
    } else {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) f(cols_[k], values_[k]);
    }
  }

  // Verifies stored (i,j)/(j,i) pairs agree to relative tolerance.
  void check_symmetric(double rel_tol = 1e-12) const;

  Vec to_dense() const;

 private:
  Hessian() = default;
  std::size_t n_ = 0;
  bool dense_ = false;
  Vec values_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
};

struct LipschitzConstants {
  Vec per_coordinate;             // L_i = Q_ii
  double l_max = 0.0;             // max_i L_i
  double l_res = 0.0;             // max column norm of Q
  std::optional<double> modulus;  // essential strong convexity parameter, if known

  double ratio() const { return l_res / l_max; }
};

// Convex quadratic 1/2 x^T Q x + c^T x over a feasible region. Immutable
// after construction; safe for concurrent reads.
class QuadraticProblem {
 public:
  QuadraticProblem(Hessian q, Vec c, FeasibleRegion region,
                   std::optional<double> optimum_hint = std::nullopt,
                   std::optional<double> modulus_hint = std::nullopt,
                   bool psd_certified = false);

  std::size_t n() const { return c_.size(); }
  const Hessian& hessian() const { return q_; }
  const Vec& linear() const { return c_; }
  const FeasibleRegion& region() const { return region_; }
  const LipschitzConstants& lipschitz() const { return lipschitz_; }
  std::optional<double> optimum_hint() const { return optimum_hint_; }
  std::optional<double> modulus_hint() const { return modulus_hint_; }
  // False for matrices that did not come from a Gram-plus-ridge construction;
  // such problems are accepted but convexity is the caller's promise.
  bool psd_certified() const { return psd_certified_; }

 private:
  Hessian q_;
  Vec c_;
  FeasibleRegion region_;
  LipschitzConstants lipschitz_;
  std::optional<double> optimum_hint_;
  std::optional<double> modulus_hint_;
  bool psd_certified_ = false;
};

double objective(const QuadraticProblem& p, const Vec& x);
Vec gradient(const QuadraticProblem& p, const Vec& x);
double coordinate_gradient(const QuadraticProblem& p, const Vec& x, std::size_t i);

Vec project(const FeasibleRegion& region, Vec x);
double project_coordinate(const FeasibleRegion& region, std::size_t i, double v);

LipschitzConstants compute_lipschitz(const Hessian& q);
LipschitzConstants compute_lipschitz(const QuadraticProblem& p);

struct ModulusEstimate {
  double value = 0.0;
  bool known = false;
};

// Lower estimate of lambda_min(Q): the generator-supplied ridge when
// available, otherwise inverse power iteration on a dense copy (n <= 2000).
ModulusEstimate estimate_modulus(const QuadraticProblem& p);

// ||grad f(x)|| unconstrained; ||x - P(x - grad f(x))|| for a box.
double residual(const QuadraticProblem& p, const Vec& x);

// Full projected-gradient trial point: every coordinate of x_current moved by
// -(gamma/L_max) * grad f(x_read) and clipped.
Vec full_prox_step(const QuadraticProblem& p, const Vec& x_read, const Vec& x_current,
                   double gamma);

struct OptimumEstimate {
  Vec x;
  double value = 0.0;
  double residual = 0.0;
  bool closed_form = false;
};

// Diagnostic optimum: dense factorization when the problem is unconstrained
// and strictly convex at moderate size, otherwise cyclic exact coordinate
// minimization until the residual target is met.
OptimumEstimate estimate_optimum(const QuadraticProblem& p, double tol = 1e-10,
                                 long max_epochs = 500000);

}  // namespace asyscd
