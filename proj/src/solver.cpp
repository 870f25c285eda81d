#include "asyscd/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "asyscd/prng.hpp"

namespace asyscd::par {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Counting barrier that releases early when `abort` flips; never reused
// after an aborted phase.
class SpinBarrier {
 public:
  explicit SpinBarrier(int n) : n_(n) {}
  void reset(int n) { n_ = n; }

  template <class F>
  bool arrive_and_wait(const std::atomic<bool>& abort, F&& on_last) {
    const std::uint64_t phase = phase_.load(std::memory_order_acquire);
    if (arrived_.fetch_add(1, std::memory_order_acq_rel) + 1 == n_) {
      on_last();
      arrived_.store(0, std::memory_order_relaxed);
      phase_.fetch_add(1, std::memory_order_release);
      return true;
    }
    while (phase_.load(std::memory_order_acquire) == phase) {
      if (abort.load(std::memory_order_relaxed)) return false;
      std::this_thread::yield();
    }
    return true;
  }

 private:
  std::atomic<int> arrived_{0};
  std::atomic<std::uint64_t> phase_{0};
  int n_;
};

inline double load_coord(const double* x, std::size_t i) {
  // Load-only access; atomic_ref needs a mutable lvalue even for loads.
  return std::atomic_ref<double>(const_cast<double&>(x[i])).load(std::memory_order_relaxed);
}

inline void store_coord(double* x, std::size_t i, double v) {
  std::atomic_ref<double>(x[i]).store(v, std::memory_order_relaxed);
}

// One coordinate gradient against the live shared iterate.
double shared_coordinate_gradient(const QuadraticProblem& p, const double* x, std::size_t i) {
  double g = p.linear()[i];
  if (p.hessian().is_dense()) {
    const auto row = p.hessian().dense_row(i);
    for (std::size_t j = 0; j < row.size(); ++j) g += row[j] * load_coord(x, j);
  } else {
    const auto cols = p.hessian().row_cols(i);
    const auto vals = p.hessian().row_vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k) g += vals[k] * load_coord(x, cols[k]);
  }
  return g;
}

Vec snapshot_of(const Vec& x) {
  Vec snap(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) snap[i] = load_coord(x.data(), i);
  return snap;
}

void validate(const SolverConfig& cfg) {
  if (cfg.threads < 1) throw std::invalid_argument("solver: threads must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("solver: tolerance must be positive");
  if (cfg.shuffle_period < 1)
    throw std::invalid_argument("solver: shuffle_period must be >= 1");
  if (cfg.check_interval < 1)
    throw std::invalid_argument("solver: check_interval must be >= 1");
  if (cfg.max_epochs < 0) throw std::invalid_argument("solver: max_epochs must be >= 0");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("solver: gamma must be positive");
}

Vec starting_point(const QuadraticProblem& p, const SolverConfig& cfg) {
  Vec x0 = cfg.x0 ? *cfg.x0 : Vec(p.n(), 0.0);
  if (x0.size() != p.n()) throw std::invalid_argument("solver: x0 dimension mismatch");
  require_finite(x0, "solver: x0");
  return project(p.region(), std::move(x0));
}

SolveResult run_coordinate_engine(const QuadraticProblem& p, const SolverConfig& cfg,
                                  bool locked) {
  validate(cfg);
  const std::size_t n = p.n();
  const double step = cfg.gamma / p.lipschitz().l_max;
  const int requested = cfg.threads;

  Vec x = starting_point(p, cfg);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  rng::shuffle(perm, cfg.seed, 0);

  std::atomic<bool> stop{false};
  std::atomic<long long> total_updates{0};
  std::mutex global_lock;
  SpinBarrier barrier(requested);

  SolveResult result;
  if (cfg.count_updates) result.updates_per_coordinate.assign(n, 0);
  if (cfg.log_writes) result.write_log.assign(n, {});
  result.trace.stride = static_cast<std::int64_t>(n) * cfg.check_interval;
  long epochs_at_exit = 0;
  double check_seconds = 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const auto run_check = [&](long epoch) {
    const auto t0 = Clock::now();
    const Vec snap = snapshot_of(x);
    const double res = residual(p, snap);
    const double obj = cfg.record_objective ? objective(p, snap) : nan;
    result.trace.points.push_back({static_cast<std::int64_t>(epoch) * static_cast<std::int64_t>(n),
                                   static_cast<double>(epoch), res, obj, nan});
    if (res <= cfg.tolerance) stop.store(true, std::memory_order_relaxed);
    if (cfg.log_writes) result.snapshots.push_back(snap);
    check_seconds += seconds_since(t0);
  };

  omp_set_dynamic(0);
  int actual_team = requested;
  const auto t_start = Clock::now();
#pragma omp parallel num_threads(requested)
  {
    const int team = omp_get_num_threads();
    const int tid = omp_get_thread_num();
#pragma omp master
    {
      barrier.reset(team);
      actual_team = team;
    }
#pragma omp barrier

    const std::size_t lo = n * static_cast<std::size_t>(tid) / static_cast<std::size_t>(team);
    const std::size_t hi =
        n * (static_cast<std::size_t>(tid) + 1) / static_cast<std::size_t>(team);
    long long my_updates = 0;
    long epoch = 0;

    while (epoch < cfg.max_epochs && !stop.load(std::memory_order_relaxed)) {
      bool aborted = false;
      for (std::size_t idx = lo; idx < hi; ++idx) {
        if ((idx & 0xffu) == 0 && stop.load(std::memory_order_relaxed)) {
          aborted = true;
          break;
        }
        const std::uint32_t i = perm[idx];
        double committed;
        if (locked) {
          const std::lock_guard<std::mutex> guard(global_lock);
          const double g = shared_coordinate_gradient(p, x.data(), i);
          const double xi = load_coord(x.data(), i);
          committed = p.region().clip(i, xi - step * g);
          store_coord(x.data(), i, committed);
        } else {
          const double g = shared_coordinate_gradient(p, x.data(), i);
          const double xi = load_coord(x.data(), i);
          committed = p.region().clip(i, xi - step * g);
          store_coord(x.data(), i, committed);
        }
        ++my_updates;
        if (cfg.count_updates) ++result.updates_per_coordinate[i];
        if (cfg.log_writes) result.write_log[i].push_back(committed);
      }
      if (aborted) break;
      ++epoch;
      if (tid == 0 && (epoch % cfg.check_interval == 0 || epoch == cfg.max_epochs)) {
        run_check(epoch);
        epochs_at_exit = epoch;
      }
      if (stop.load(std::memory_order_relaxed)) break;
      if (epoch % cfg.shuffle_period == 0 && epoch < cfg.max_epochs) {
        const long round = epoch / cfg.shuffle_period;
        if (!barrier.arrive_and_wait(stop, [&] {
              rng::shuffle(perm, cfg.seed, static_cast<std::uint64_t>(round));
            }))
          break;
      }
    }
    total_updates.fetch_add(my_updates, std::memory_order_relaxed);
  }
  const double elapsed = seconds_since(t_start);

  result.x = std::move(x);
  result.stats.solve_seconds = elapsed;
  result.stats.check_seconds = check_seconds;
  result.stats.epochs = epochs_at_exit;
  result.stats.updates = total_updates.load();
  result.stats.threads = actual_team;
  result.stats.final_residual = residual(p, result.x);
  result.stats.tolerance_reached = result.stats.final_residual <= cfg.tolerance;
  return result;
}

}  // namespace

SolveResult solve_async(const QuadraticProblem& p, const SolverConfig& cfg) {
  return run_coordinate_engine(p, cfg, /*locked=*/false);
}

SolveResult solve_locked(const QuadraticProblem& p, const SolverConfig& cfg) {
  return run_coordinate_engine(p, cfg, /*locked=*/true);
}

SolveResult solve_syngd(const QuadraticProblem& p, const SolverConfig& cfg) {
  validate(cfg);
  const std::size_t n = p.n();
  const int threads = cfg.threads;
  omp_set_dynamic(0);

  const auto t_start = Clock::now();

  // Full-gradient Lipschitz constant by power iteration on Q.
  Vec v(n), qv(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng::uniform01(cfg.seed ^ 0x5947dULL, i) + 0.5;
  double lambda = 0.0;
  {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& w : v) w /= norm;
    for (int it = 0; it < 200; ++it) {
#pragma omp parallel for num_threads(threads) schedule(static)
      for (std::size_t i = 0; i < n; ++i) qv[i] = p.hessian().row_dot(i, v.data());
      double next = std::inner_product(v.begin(), v.end(), qv.begin(), 0.0);
      const double qnorm = std::sqrt(std::inner_product(qv.begin(), qv.end(), qv.begin(), 0.0));
      if (qnorm == 0.0) {
        next = 0.0;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = qv[i] / qnorm;
      if (it > 0 && std::abs(next - lambda) <= 1e-6 * std::abs(next)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
  }
  if (!(lambda > 0.0)) lambda = p.lipschitz().l_max;  // degenerate fallback
  const double step = 1.0 / lambda;

  Vec x = starting_point(p, cfg);
  Vec g(n);
  SolveResult result;
  result.trace.stride = static_cast<std::int64_t>(n);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  long it = 0;
  bool reached = false;
  double res = 0.0;
  for (; it <= cfg.max_epochs; ++it) {
#pragma omp parallel for num_threads(threads) schedule(static)
    for (std::size_t i = 0; i < n; ++i) g[i] = p.hessian().row_dot(i, x.data()) + p.linear()[i];

    double res_sq = 0.0;
    if (p.region().is_box()) {
      for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - p.region().clip(i, x[i] - g[i]);
        res_sq += d * d;
      }
    } else {
      res_sq = std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }
    res = std::sqrt(res_sq);
    result.trace.points.push_back({static_cast<std::int64_t>(it) * static_cast<std::int64_t>(n),
                                   static_cast<double>(it), res,
                                   cfg.record_objective ? objective(p, x) : nan, nan});
    if (res <= cfg.tolerance) {
      reached = true;
      break;
    }
    if (it == cfg.max_epochs) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = p.region().clip(i, x[i] - step * g[i]);
  }

  result.x = std::move(x);
  result.stats.solve_seconds = seconds_since(t_start);
  result.stats.check_seconds = 0.0;
  result.stats.epochs = it;
  result.stats.updates = static_cast<long long>(it) * static_cast<long long>(n);
  result.stats.threads = threads;
  result.stats.final_residual = res;
  result.stats.tolerance_reached = reached;
  return result;
}

std::vector<SpeedupRow> measure_speedup(const QuadraticProblem& p, const SolverConfig& base,
                                        const std::vector<int>& thread_list, int reps,
                                        const EngineFn& engine) {
  if (reps < 1) throw std::invalid_argument("measure_speedup: reps must be >= 1");
  if (thread_list.empty()) throw std::invalid_argument("measure_speedup: no thread counts");

  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };

  std::vector<SpeedupRow> rows;
  double t1 = std::numeric_limits<double>::quiet_NaN();
  for (int threads : thread_list) {
    std::vector<double> times, epochs;
    bool reached = true;
    for (int rep = 0; rep < reps; ++rep) {
      SolverConfig cfg = base;
      cfg.threads = threads;
      cfg.seed = base.seed + static_cast<std::uint64_t>(rep);
      const SolveResult r = engine(p, cfg);
      times.push_back(r.stats.solve_seconds);
      epochs.push_back(static_cast<double>(r.stats.epochs));
      reached = reached && r.stats.tolerance_reached;
    }
    SpeedupRow row;
    row.threads = threads;
    row.median_sec = median(times);
    row.epochs = static_cast<long>(std::llround(median(epochs)));
    row.reached = reached;
    if (threads == 1 && reached) t1 = row.median_sec;
    rows.push_back(row);
  }
  for (SpeedupRow& row : rows) {
    if (row.reached && std::isfinite(t1) && row.median_sec > 0.0)
      row.speedup = t1 / row.median_sec;
  }
  return rows;
}

}  // namespace asyscd::par
