#include "asyscd/simulator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "asyscd/prng.hpp"

namespace asyscd::sim {

namespace {
constexpr std::uint64_t kDelaySalt = 0x64656c6179ULL;

double dist_or_nan(const Vec& x, const Vec* ref) {
  if (ref == nullptr) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - (*ref)[i];
    s += d * d;
  }
  return std::sqrt(s);
}
}  // namespace

std::int64_t DelaySchedule::read_index(std::int64_t j) const {
  switch (kind) {
    case Kind::Zero:
      return j;
    case Kind::FixedTau:
    case Kind::Adversarial:
      return std::max<std::int64_t>(0, j - tau);
    case Kind::RandomUniform: {
      const std::int64_t window = std::min<std::int64_t>(tau, j);
      const std::uint64_t key = rng::derive(seed, kDelaySalt);
      const auto lag = static_cast<std::int64_t>(
          rng::uniform_index(key, static_cast<std::uint64_t>(j),
                             static_cast<std::uint64_t>(window) + 1));
      return j - lag;
    }
  }
  return j;
}

IterateHistory::IterateHistory(std::int64_t tau, const Vec& x0) : tau_(tau) {
  if (tau < 0) throw std::invalid_argument("IterateHistory: tau must be >= 0");
  ring_.assign(static_cast<std::size_t>(tau) + 1, x0);
}

void IterateHistory::push(const Vec& x) {
  ++latest_;
  ring_[static_cast<std::size_t>(latest_ % (tau_ + 1))] = x;
}

const Vec& IterateHistory::lookup(std::int64_t k) const {
  if (k > latest_ || k < latest_ - tau_ || k < 0)
    throw std::out_of_range("IterateHistory::lookup: iterate " + std::to_string(k) +
                            " is outside the retained window");
  return ring_[static_cast<std::size_t>(k % (tau_ + 1))];
}

RunResult run(const QuadraticProblem& p, const theory::StepPlan& plan,
              const DelaySchedule& schedule, Vec x0, std::int64_t num_updates,
              std::uint64_t seed, const RunOptions& opts) {
  if (num_updates < 0) throw std::invalid_argument("run: num_updates must be >= 0");
  if (x0.size() != p.n()) throw std::invalid_argument("run: x0 dimension mismatch");
  require_finite(x0, "run: x0");

  if (opts.log_grad_norm_sq && opts.log_prox_gap_sq)
    throw std::invalid_argument("run: pick one norm log, not both");

  const std::int64_t n = static_cast<std::int64_t>(p.n());
  const std::int64_t stride = opts.stride > 0 ? opts.stride : n;
  const std::int64_t tau = plan.tau;
  const double step = plan.gamma / p.lipschitz().l_max;

  Vec x = project(p.region(), std::move(x0));
  // With tau = 0 the retained window is just the live iterate.
  IterateHistory history(tau > 0 ? tau : 0, tau > 0 ? x : Vec{});

  RunResult out;
  out.trace.stride = stride;
  if (opts.log_grad_norm_sq || opts.log_prox_gap_sq)
    out.norm_log.reserve(static_cast<std::size_t>(num_updates) + 1);

  const auto record = [&](std::int64_t j) {
    out.trace.points.push_back({j, static_cast<double>(j) / static_cast<double>(n),
                                residual(p, x), objective(p, x), dist_or_nan(x, opts.reference)});
  };
  const auto grad_norm_sq = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i) {
      const double g = coordinate_gradient(p, x, i);
      s += g * g;
    }
    return s;
  };

  record(0);
  for (std::int64_t j = 0; j < num_updates; ++j) {
    const std::int64_t k = opts.custom_read_index ? opts.custom_read_index(j)
                                                  : schedule.read_index(j);
    if (k > j || j - k > tau || k < 0)
      throw std::runtime_error("run: delay schedule violated the bound at step " +
                               std::to_string(j) + " (k=" + std::to_string(k) + ")");
    if (opts.log_grad_norm_sq) out.norm_log.push_back(grad_norm_sq());
    const Vec& x_read = tau > 0 ? history.lookup(k) : x;
    if (opts.log_prox_gap_sq) {
      const Vec xbar = full_prox_step(p, x_read, x, plan.gamma);
      double s = 0.0;
      for (std::size_t i = 0; i < p.n(); ++i) {
        const double d = x[i] - xbar[i];
        s += d * d;
      }
      out.norm_log.push_back(s);
    }
    const auto i = static_cast<std::size_t>(
        rng::uniform_index(seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(n)));
    const double g = p.hessian().row_dot(i, x_read.data()) + p.linear()[i];
    x[i] = p.region().clip(i, x[i] - step * g);
    if (tau > 0) history.push(x);
    if ((j + 1) % stride == 0 || j + 1 == num_updates) record(j + 1);
  }
  if (opts.log_grad_norm_sq) out.norm_log.push_back(grad_norm_sq());

  out.x = std::move(x);
  return out;
}

RunResult serial_reference(const QuadraticProblem& p, double gamma, Vec x0,
                           std::int64_t num_updates, std::uint64_t seed,
                           const RunOptions& opts) {
  if (num_updates < 0)
    throw std::invalid_argument("serial_reference: num_updates must be >= 0");
  if (x0.size() != p.n()) throw std::invalid_argument("serial_reference: x0 dimension mismatch");
  require_finite(x0, "serial_reference: x0");

  const std::int64_t n = static_cast<std::int64_t>(p.n());
  const std::int64_t stride = opts.stride > 0 ? opts.stride : n;
  const double step = gamma / p.lipschitz().l_max;

  Vec x = project(p.region(), std::move(x0));

  RunResult out;
  out.trace.stride = stride;
  if (opts.log_grad_norm_sq)
    out.norm_log.reserve(static_cast<std::size_t>(num_updates) + 1);

  const auto record = [&](std::int64_t j) {
    out.trace.points.push_back({j, static_cast<double>(j) / static_cast<double>(n),
                                residual(p, x), objective(p, x), dist_or_nan(x, opts.reference)});
  };
  const auto grad_norm_sq = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i) {
      const double g = coordinate_gradient(p, x, i);
      s += g * g;
    }
    return s;
  };

  record(0);
  for (std::int64_t j = 0; j < num_updates; ++j) {
    if (opts.log_grad_norm_sq) out.norm_log.push_back(grad_norm_sq());
    const auto i = static_cast<std::size_t>(
        rng::uniform_index(seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(n)));
    const double g = p.hessian().row_dot(i, x.data()) + p.linear()[i];
    x[i] = p.region().clip(i, x[i] - step * g);
    if ((j + 1) % stride == 0 || j + 1 == num_updates) record(j + 1);
  }
  if (opts.log_grad_norm_sq) out.norm_log.push_back(grad_norm_sq());

  out.x = std::move(x);
  return out;
}

RatioBand ratio_diagnostic(const std::vector<std::vector<double>>& norm_logs_sq) {
  if (norm_logs_sq.size() < 30)
    throw std::invalid_argument("ratio_diagnostic: needs at least 30 seeds");
  const std::size_t len = norm_logs_sq.front().size();
  if (len < 2) throw std::invalid_argument("ratio_diagnostic: logs too short");
  for (const auto& log : norm_logs_sq)
    if (log.size() != len)
      throw std::invalid_argument("ratio_diagnostic: seed logs have unequal lengths");

  std::vector<double> mean(len, 0.0);
  for (const auto& log : norm_logs_sq)
    for (std::size_t j = 0; j < len; ++j) mean[j] += log[j];
  for (double& m : mean) m /= static_cast<double>(norm_logs_sq.size());

  RatioBand band;
  band.lo = std::numeric_limits<double>::infinity();
  band.hi = -std::numeric_limits<double>::infinity();
  band.ratios.reserve(len - 1);
  for (std::size_t j = 0; j + 1 < len; ++j) {
    // A constant run (all iterates at a fixed point) gives ratio exactly 1.
    const double r = mean[j + 1] == mean[j] ? 1.0 : mean[j + 1] / mean[j];
    band.ratios.push_back(r);
    band.lo = std::min(band.lo, r);
    band.hi = std::max(band.hi, r);
  }
  return band;
}

}  // namespace asyscd::sim
