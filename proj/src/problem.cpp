#include "asyscd/problem.hpp"

#include <algorithm>
#include <cmath>

#include "asyscd/linalg.hpp"

namespace asyscd {

void require_finite(const Vec& x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

FeasibleRegion FeasibleRegion::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("FeasibleRegion::box: bound size mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
      throw std::invalid_argument("FeasibleRegion::box: requires lo <= hi per coordinate");
  }
  FeasibleRegion r;
  r.kind = RegionKind::Box;
  r.lower = std::move(lo);
  r.upper = std::move(hi);
  return r;
}

FeasibleRegion FeasibleRegion::nonnegative(std::size_t n) {
  return box(Vec(n, 0.0), Vec(n, kInf));
}

FeasibleRegion FeasibleRegion::unit_box(std::size_t n) {
  return box(Vec(n, 0.0), Vec(n, 1.0));
}

FeasibleRegion FeasibleRegion::uniform_box(std::size_t n, double lo, double hi) {
  return box(Vec(n, lo), Vec(n, hi));
}

bool FeasibleRegion::contains(const Vec& x, double tol) const {
  if (kind == RegionKind::Unconstrained) return true;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

Hessian Hessian::dense(std::size_t n, Vec values) {
  if (values.size() != n * n) throw std::invalid_argument("Hessian::dense: size mismatch");
  Hessian h;
  h.n_ = n;
  h.dense_ = true;
  h.values_ = std::move(values);
  return h;
}

Hessian Hessian::csr(std::size_t n, std::vector<std::size_t> row_ptr,
                     std::vector<std::uint32_t> cols, Vec vals) {
  if (row_ptr.size() != n + 1 || row_ptr.front() != 0 || row_ptr.back() != cols.size() ||
      cols.size() != vals.size())
    throw std::invalid_argument("Hessian::csr: inconsistent structure");
  for (std::size_t i = 0; i < n; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw std::invalid_argument("Hessian::csr: row_ptr not monotone");
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (cols[k] >= n) throw std::invalid_argument("Hessian::csr: column index out of range");
      if (k > row_ptr[i] && cols[k] <= cols[k - 1])
        throw std::invalid_argument("Hessian::csr: columns must be strictly increasing per row");
    }
  }
  Hessian h;
  h.n_ = n;
  h.dense_ = false;
  h.row_ptr_ = std::move(row_ptr);
  h.cols_ = std::move(cols);
  h.values_ = std::move(vals);
  return h;
}

Hessian Hessian::from_dense_auto(std::size_t n, const Vec& values) {
  if (values.size() != n * n) throw std::invalid_argument("Hessian: size mismatch");
  std::size_t nnz = 0;
  for (double v : values) nnz += (v != 0.0);
  if (4 * nnz > n * n) return dense(n, values);
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::uint32_t> cols;
  Vec vals;
  cols.reserve(nnz);
  vals.reserve(nnz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[i * n + j];
      if (v != 0.0) {
        cols.push_back(static_cast<std::uint32_t>(j));
        vals.push_back(v);
      }
    }
    row_ptr[i + 1] = cols.size();
  }
  return csr(n, std::move(row_ptr), std::move(cols), std::move(vals));
}

std::size_t Hessian::stored_nonzeros() const {
  if (!dense_) return values_.size();
  std::size_t nnz = 0;
  for (double v : values_) nnz += (v != 0.0);
  return nnz;
}

double Hessian::diag(std::size_t i) const { return entry(i, i); }

double Hessian::entry(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("Hessian::entry: index out of range");
  if (dense_) return values_[i * n_ + j];
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

double Hessian::row_dot(std::size_t i, const double* x) const {
  double s = 0.0;
  if (dense_) {
    const double* row = values_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
  } else {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[cols_[k]];
  }
  return s;
}

double Hessian::row_norm(std::size_t i) const {
  double s = 0.0;
  if (dense_) {
    const double* row = values_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * row[j];
  } else {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * values_[k];
  }
  return std::sqrt(s);
}

double Hessian::quad_form(const double* x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += x[i] * row_dot(i, x);
  return s;
}

std::span<const double> Hessian::dense_row(std::size_t i) const {
  if (!dense_) throw std::logic_error("Hessian::dense_row: sparse storage");
  return {values_.data() + i * n_, n_};
}

std::span<const std::uint32_t> Hessian::row_cols(std::size_t i) const {
  if (dense_) throw std::logic_error("Hessian::row_cols: dense storage");
  return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::span<const double> Hessian::row_vals(std::size_t i) const {
  if (dense_) throw std::logic_error("Hessian::row_vals: dense storage");
  return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

void Hessian::check_symmetric(double rel_tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    visit_row(i, [&](std::size_t j, double v) {
      const double w = entry(j, i);
      const double scale = std::max(std::abs(v), std::abs(w));
      if (std::abs(v - w) > rel_tol * scale)
        throw std::invalid_argument("Hessian: matrix is not symmetric");
    });
  }
}

Vec Hessian::to_dense() const {
  Vec out(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    visit_row(i, [&](std::size_t j, double v) { out[i * n_ + j] = v; });
  return out;
}

QuadraticProblem::QuadraticProblem(Hessian q, Vec c, FeasibleRegion region,
                                   std::optional<double> optimum_hint,
                                   std::optional<double> modulus_hint, bool psd_certified)
    : q_(std::move(q)),
      c_(std::move(c)),
      region_(std::move(region)),
      optimum_hint_(optimum_hint),
      modulus_hint_(modulus_hint),
      psd_certified_(psd_certified) {
  if (q_.dim() != c_.size())
    throw std::invalid_argument("QuadraticProblem: Hessian/linear size mismatch");
  if (region_.is_box() && region_.lower.size() != c_.size())
    throw std::invalid_argument("QuadraticProblem: region size mismatch");
  require_finite(c_, "QuadraticProblem: linear term");
  q_.check_symmetric();
  lipschitz_ = asyscd::compute_lipschitz(q_);
  lipschitz_.modulus = modulus_hint_;
}

double objective(const QuadraticProblem& p, const Vec& x) {
  if (x.size() != p.n()) throw std::invalid_argument("objective: dimension mismatch");
  double s = 0.5 * p.hessian().quad_form(x.data());
  const Vec& c = p.linear();
  for (std::size_t i = 0; i < x.size(); ++i) s += c[i] * x[i];
  return s;
}

Vec gradient(const QuadraticProblem& p, const Vec& x) {
  if (x.size() != p.n()) throw std::invalid_argument("gradient: dimension mismatch");
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    g[i] = p.hessian().row_dot(i, x.data()) + p.linear()[i];
  return g;
}

double coordinate_gradient(const QuadraticProblem& p, const Vec& x, std::size_t i) {
  if (x.size() != p.n()) throw std::invalid_argument("coordinate_gradient: dimension mismatch");
  if (i >= p.n()) throw std::out_of_range("coordinate_gradient: index out of range");
  return p.hessian().row_dot(i, x.data()) + p.linear()[i];
}

Vec project(const FeasibleRegion& region, Vec x) {
  if (region.is_box()) {
    if (x.size() != region.lower.size())
      throw std::invalid_argument("project: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = region.clip(i, x[i]);
  }
  return x;
}

double project_coordinate(const FeasibleRegion& region, std::size_t i, double v) {
  if (region.is_box() && i >= region.lower.size())
    throw std::out_of_range("project_coordinate: index out of range");
  return region.clip(i, v);
}

LipschitzConstants compute_lipschitz(const Hessian& q) {
  LipschitzConstants lc;
  const std::size_t n = q.dim();
  lc.per_coordinate.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = q.diag(i);
    if (!(d > 0.0))
      throw std::invalid_argument("compute_lipschitz: Hessian diagonal must be positive");
    lc.per_coordinate[i] = d;
    lc.l_max = std::max(lc.l_max, d);
    lc.l_res = std::max(lc.l_res, q.row_norm(i));
  }
  // A column norm is at least the diagonal entry; guard the 1-ulp sqrt case.
  lc.l_res = std::max(lc.l_res, lc.l_max);
  return lc;
}

LipschitzConstants compute_lipschitz(const QuadraticProblem& p) {
  LipschitzConstants lc = compute_lipschitz(p.hessian());
  lc.modulus = p.modulus_hint();
  return lc;
}

ModulusEstimate estimate_modulus(const QuadraticProblem& p) {
  if (p.modulus_hint()) return {*p.modulus_hint(), true};
  if (p.n() > 2000) return {0.0, false};
  const double lam = linalg::smallest_eigenvalue(p.n(), p.hessian().to_dense());
  return {lam, true};
}

double residual(const QuadraticProblem& p, const Vec& x) {
  double s = 0.0;
  if (!p.region().is_box()) {
    for (std::size_t i = 0; i < p.n(); ++i) {
      const double g = coordinate_gradient(p, x, i);
      s += g * g;
    }
  } else {
    for (std::size_t i = 0; i < p.n(); ++i) {
      const double g = coordinate_gradient(p, x, i);
      const double d = x[i] - p.region().clip(i, x[i] - g);
      s += d * d;
    }
  }
  return std::sqrt(s);
}

Vec full_prox_step(const QuadraticProblem& p, const Vec& x_read, const Vec& x_current,
                   double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("full_prox_step: gamma must be positive");
  const double step = gamma / p.lipschitz().l_max;
  Vec out(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double g = coordinate_gradient(p, x_read, i);
    out[i] = p.region().clip(i, x_current[i] - step * g);
  }
  return out;
}

namespace {

// Cyclic exact coordinate minimization with clipping; used only to produce
// reference optima for diagnostics.
OptimumEstimate coordinate_polish(const QuadraticProblem& p, Vec x, double tol,
                                  long max_epochs) {
  const std::size_t n = p.n();
  double res = residual(p, x);
  for (long epoch = 0; epoch < max_epochs && res > tol; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) {
      const double g = coordinate_gradient(p, x, i);
      x[i] = p.region().clip(i, x[i] - g / p.lipschitz().per_coordinate[i]);
    }
    res = residual(p, x);
  }
  return {std::move(x), 0.0, res, false};
}

}  // namespace

OptimumEstimate estimate_optimum(const QuadraticProblem& p, double tol, long max_epochs) {
  if (!p.region().is_box() && p.n() <= 4000) {
    try {
      linalg::LuFactor lu(p.n(), p.hessian().to_dense());
      Vec rhs = p.linear();
      for (double& v : rhs) v = -v;
      Vec x = lu.solve(std::move(rhs));
      const double res = residual(p, x);
      if (res <= std::max(tol, 1e-8)) {
        OptimumEstimate est{std::move(x), 0.0, res, true};
        est.value = objective(p, est.x);
        return est;
      }
    } catch (const std::runtime_error&) {
      // singular: fall through to the iterative path
    }
  }
  Vec x0 = project(p.region(), Vec(p.n(), 0.0));
  OptimumEstimate est = coordinate_polish(p, std::move(x0), tol, max_epochs);
  est.value = objective(p, est.x);
  return est;
}

}  // namespace asyscd
