#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "asyscd/problem.hpp"
#include "asyscd/simulator.hpp"

// Multicore engines: a lock-free asynchronous coordinate-descent solver with
// epoch-based shuffled traversal, plus global-locking and synchronous
// full-gradient baselines for speedup comparisons.

namespace asyscd::par {

struct SolverConfig {
  int threads = 1;
  double gamma = 1.0;
  long shuffle_period = 1;   // epochs between global reshuffles
  double tolerance = 1e-5;
  long max_epochs = 1000;
  std::uint64_t seed = 0;
  long check_interval = 1;   // epochs between residual checks
  std::optional<Vec> x0;     // defaults to the projected origin
  bool count_updates = false;  // per-coordinate accounting (debug)
  bool record_objective = true;  // objective at checkpoints (costs one pass)
  bool log_writes = false;   // record every committed value and snapshot (debug)
};

struct Stats {
  double solve_seconds = 0.0;  // wall clock around the worker region
  double check_seconds = 0.0;  // time spent in residual checks (within solve)
  long epochs = 0;
  long long updates = 0;
  int threads = 1;
  double final_residual = std::numeric_limits<double>::quiet_NaN();
  bool tolerance_reached = false;
};

struct SolveResult {
  Vec x;
  sim::Trace trace;
  Stats stats;
  std::vector<long long> updates_per_coordinate;   // filled when count_updates
  std::vector<std::vector<double>> write_log;      // per coordinate, when log_writes
  std::vector<Vec> snapshots;                      // residual-check snapshots, when log_writes
};

// Lock-free asynchronous coordinate descent. Coordinates are dealt to
// threads in contiguous blocks of a globally shuffled order; each thread
// sweeps its block once per epoch, updating against the live shared iterate.
SolveResult solve_async(const QuadraticProblem& p, const SolverConfig& cfg);

// Same traversal, but every read-evaluate-update holds one global mutex.
// Kept as a negative baseline.
SolveResult solve_locked(const QuadraticProblem& p, const SolverConfig& cfg);

// Synchronous projected gradient descent with steplength 1/L, the full
// gradient computed as a row-partitioned parallel reduction each iteration.
SolveResult solve_syngd(const QuadraticProblem& p, const SolverConfig& cfg);

struct SpeedupRow {
  int threads = 1;
  double median_sec = 0.0;
  double speedup = std::numeric_limits<double>::quiet_NaN();
  long epochs = 0;
  bool reached = false;
};

using EngineFn = std::function<SolveResult(const QuadraticProblem&, const SolverConfig&)>;

// Repeats the solve `reps` times per thread count and reports medians;
// speedup is the single-thread median over the P-thread median. Rows that
// missed the tolerance keep speedup = NaN.
std::vector<SpeedupRow> measure_speedup(const QuadraticProblem& p, const SolverConfig& base,
                                        const std::vector<int>& thread_list, int reps,
                                        const EngineFn& engine = solve_async);

}  // namespace asyscd::par
