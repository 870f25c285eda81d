#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "asyscd/problem.hpp"
#include "asyscd/theory.hpp"

// Deterministic single-threaded execution of the analyzed algorithm:
// sampling with replacement, an explicit delay schedule k(j), and consistent
// reads of whole past iterates.

namespace asyscd::sim {

struct DelaySchedule {
  enum class Kind { Zero, FixedTau, RandomUniform, Adversarial };
  Kind kind = Kind::Zero;
  std::int64_t tau = 0;
  std::uint64_t seed = 0;

  static DelaySchedule zero() { return {}; }
  static DelaySchedule fixed(std::int64_t tau) { return {Kind::FixedTau, tau, 0}; }
  static DelaySchedule random_uniform(std::int64_t tau, std::uint64_t seed) {
    return {Kind::RandomUniform, tau, seed};
  }
  static DelaySchedule adversarial(std::int64_t tau) { return {Kind::Adversarial, tau, 0}; }

  // Index k(j) of the iterate used for the gradient applied at step j.
  std::int64_t read_index(std::int64_t j) const;
};

// Ring buffer of the last tau+1 full iterates; lookups outside the window
// are an error by construction.
class IterateHistory {
 public:
  IterateHistory(std::int64_t tau, const Vec& x0);
  void push(const Vec& x);                   // appends iterate latest()+1
  const Vec& lookup(std::int64_t k) const;   // valid for latest()-tau <= k <= latest()
  std::int64_t latest() const { return latest_; }

 private:
  std::int64_t tau_;
  std::int64_t latest_ = 0;
  std::vector<Vec> ring_;
};

struct Checkpoint {
  std::int64_t step = 0;
  double epoch = 0.0;
  double residual = 0.0;
  double objective = 0.0;
  double dist_to_ref = 0.0;  // NaN when no reference point was supplied
};

struct Trace {
  std::vector<Checkpoint> points;
  std::int64_t stride = 0;
};

struct RunOptions {
  std::int64_t stride = 0;           // checkpoint stride; 0 means n
  const Vec* reference = nullptr;    // point for dist_to_ref
  bool log_grad_norm_sq = false;     // ||grad f(x_j)||^2 for j = 0..K
  bool log_prox_gap_sq = false;      // ||x_j - xbar_{j+1}||^2 for j = 0..K-1
  // Test hook: overrides the schedule when set; the run still enforces the
  // delay bound and reports a violation as an error.
  std::function<std::int64_t(std::int64_t)> custom_read_index;
};

struct RunResult {
  Vec x;
  Trace trace;
  std::vector<double> norm_log;  // filled when a log_* option is set
};

// Performs `num_updates` single-coordinate updates from x0 (projected on
// entry if infeasible). Coordinate draws come from the counter stream
// (seed, j), so runs are bitwise deterministic.
RunResult run(const QuadraticProblem& p, const theory::StepPlan& plan,
              const DelaySchedule& schedule, Vec x0, std::int64_t num_updates,
              std::uint64_t seed, const RunOptions& opts = {});

// Zero-delay reference kept as an independent code path; must match run()
// with a Zero schedule bit for bit.
RunResult serial_reference(const QuadraticProblem& p, double gamma, Vec x0,
                           std::int64_t num_updates, std::uint64_t seed,
                           const RunOptions& opts = {});

struct RatioBand {
  std::vector<double> ratios;  // ratio of seed-mean squared norms at j+1 vs j
  double lo = 0.0;
  double hi = 0.0;
};

// Successive-step ratio estimate from >= 30 seeds of norm logs.
RatioBand ratio_diagnostic(const std::vector<std::vector<double>>& norm_logs_sq);

}  // namespace asyscd::sim
