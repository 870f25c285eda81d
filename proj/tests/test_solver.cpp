#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>

#include "asyscd/generators.hpp"
#include "asyscd/prng.hpp"
#include "asyscd/problem.hpp"
#include "asyscd/solver.hpp"

using namespace asyscd;

namespace {

// Independent single-threaded shuffled coordinate descent mirroring the
// engine's traversal contract: global shuffle each `shuffle_period` epochs,
// one pass per epoch, gradient accumulated from the linear term.
Vec oracle_shuffled_cd(const QuadraticProblem& p, const par::SolverConfig& cfg, long epochs) {
  const std::size_t n = p.n();
  Vec x = project(p.region(), cfg.x0 ? *cfg.x0 : Vec(n, 0.0));
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  rng::shuffle(perm, cfg.seed, 0);
  const double step = cfg.gamma / p.lipschitz().l_max;
  for (long e = 0; e < epochs; ++e) {
    for (std::size_t idx = 0; idx < n; ++idx) {
      const std::uint32_t i = perm[idx];
      double g = p.linear()[i];
      if (p.hessian().is_dense()) {
        const auto row = p.hessian().dense_row(i);
        for (std::size_t j = 0; j < n; ++j) g += row[j] * x[j];
      } else {
        const auto cols = p.hessian().row_cols(i);
        const auto vals = p.hessian().row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) g += vals[k] * x[cols[k]];
      }
      x[i] = p.region().clip(i, x[i] - step * g);
    }
    if ((e + 1) % cfg.shuffle_period == 0 && e + 1 < epochs)
      rng::shuffle(perm, cfg.seed,
                   static_cast<std::uint64_t>((e + 1) / cfg.shuffle_period));
  }
  return x;
}

QuadraticProblem small_qp(std::uint64_t seed, std::size_t n, bool box) {
  rng::GaussianStream gs(seed);
  const std::size_t k = n + 8;
  std::vector<double> b(k * n);
  for (double& v : b) v = gs.next();
  Vec q(n * n, 0.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) q[i * n + j] += b[r * n + i] * b[r * n + j] / k;
  for (std::size_t i = 0; i < n; ++i) {
    q[i * n + i] += 0.5;
    for (std::size_t j = i + 1; j < n; ++j) q[j * n + i] = q[i * n + j];
  }
  Vec c(n);
  for (double& v : c) v = gs.next();
  auto region =
      box ? FeasibleRegion::nonnegative(n) : FeasibleRegion::unconstrained();
  return QuadraticProblem(Hessian::dense(n, std::move(q)), std::move(c), std::move(region),
                          std::nullopt, 0.5, true);
}

}  // namespace

TEST_CASE("single thread equals the shuffled serial oracle") {
  for (int variant = 0; variant < 2; ++variant) {
    const QuadraticProblem p = small_qp(variant + 1, 24, variant == 1);
    par::SolverConfig cfg;
    cfg.threads = 1;
    cfg.gamma = 0.9;
    cfg.shuffle_period = variant == 0 ? 1 : 3;
    cfg.tolerance = 1e-14;
    cfg.max_epochs = 12;
    cfg.seed = 99 + variant;
    cfg.check_interval = 100;  // no early stop
    const par::SolveResult r = par::solve_async(p, cfg);
    const Vec oracle = oracle_shuffled_cd(p, cfg, cfg.max_epochs);
    REQUIRE(r.x.size() == oracle.size());
    CHECK(std::memcmp(r.x.data(), oracle.data(), oracle.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("async and locked runs coincide on one thread") {
  const QuadraticProblem p = small_qp(7, 30, true);
  par::SolverConfig cfg;
  cfg.threads = 1;
  cfg.gamma = 1.0;
  cfg.shuffle_period = 2;
  cfg.tolerance = 1e-9;
  cfg.max_epochs = 200;
  cfg.seed = 5;
  const par::SolveResult a = par::solve_async(p, cfg);
  const par::SolveResult b = par::solve_locked(p, cfg);
  REQUIRE(a.x.size() == b.x.size());
  CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
  CHECK(a.stats.epochs == b.stats.epochs);
  REQUIRE(a.trace.points.size() == b.trace.points.size());
  for (std::size_t i = 0; i < a.trace.points.size(); ++i) {
    CHECK(a.trace.points[i].residual == b.trace.points[i].residual);
    CHECK(a.trace.points[i].objective == b.trace.points[i].objective);
  }
}

TEST_CASE("epoch accounting between reshuffles") {
  const QuadraticProblem p = small_qp(11, 32, false);
  par::SolverConfig cfg;
  cfg.threads = 4;
  cfg.gamma = 0.5;
  cfg.shuffle_period = 3;
  cfg.tolerance = 1e-300;  // never reached
  cfg.max_epochs = 9;
  cfg.seed = 1;
  cfg.count_updates = true;
  cfg.check_interval = 100;
  const par::SolveResult r = par::solve_async(p, cfg);
  REQUIRE(r.updates_per_coordinate.size() == p.n());
  for (long long c : r.updates_per_coordinate) CHECK(c == cfg.max_epochs);
  CHECK(r.stats.updates == static_cast<long long>(cfg.max_epochs) * 32);
}

TEST_CASE("reported residual matches a serial recomputation") {
  const QuadraticProblem p = small_qp(13, 40, true);
  par::SolverConfig cfg;
  cfg.threads = 4;
  cfg.gamma = 1.0;
  cfg.tolerance = 1e-6;
  cfg.max_epochs = 500;
  cfg.seed = 2;
  const par::SolveResult r = par::solve_async(p, cfg);
  CHECK(r.stats.tolerance_reached);
  CHECK(p.region().contains(r.x));
  CHECK(std::abs(residual(p, r.x) - r.stats.final_residual) <= 1e-12);
}

TEST_CASE("convergence robustness across thread counts") {
  gen::SyntheticSpec spec;
  spec.m = 150;
  spec.n = 300;
  spec.alpha = 0.5;
  spec.seed = 8080;
  const QuadraticProblem p = gen_synthetic_qp(spec);

  const auto median_epochs = [&](int threads) {
    std::vector<long> epochs;
    for (int rep = 0; rep < 5; ++rep) {
      par::SolverConfig cfg;
      cfg.threads = threads;
      cfg.gamma = 1.0;
      cfg.tolerance = 1e-5;
      cfg.max_epochs = 400;
      cfg.seed = 100 + rep;
      cfg.record_objective = false;
      const par::SolveResult r = par::solve_async(p, cfg);
      REQUIRE(r.stats.tolerance_reached);
      epochs.push_back(r.stats.epochs);
    }
    std::sort(epochs.begin(), epochs.end());
    return epochs[2];
  };

  const long base = median_epochs(1);
  for (int threads : {2, 4, 8}) {
    const long e = median_epochs(threads);
    CHECK(e <= 2 * base);
  }
}

TEST_CASE("no torn values under write logging stress") {
  const std::size_t n = 64;
  const QuadraticProblem p = small_qp(17, n, false);
  par::SolverConfig cfg;
  cfg.threads = 8;
  cfg.gamma = 0.8;
  cfg.shuffle_period = 625;
  cfg.tolerance = 1e-300;
  cfg.max_epochs = 15625;  // about 1e6 updates across the team
  cfg.seed = 3;
  cfg.check_interval = 3000;
  cfg.log_writes = true;
  cfg.record_objective = false;
  const par::SolveResult r = par::solve_async(p, cfg);
  CHECK(r.stats.updates >= 1000000);

  std::vector<std::set<double>> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    seen[i].insert(0.0);  // starting point
    for (double v : r.write_log[i]) seen[i].insert(v);
  }
  for (std::size_t i = 0; i < n; ++i) CHECK(seen[i].count(r.x[i]) == 1);
  for (const Vec& snap : r.snapshots)
    for (std::size_t i = 0; i < n; ++i) CHECK(seen[i].count(snap[i]) == 1);
}

TEST_CASE("synchronous gradient descent baseline") {
  // Identity Hessian: one exact step.
  const QuadraticProblem id(Hessian::dense(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}),
                            {-1, -1, -1}, FeasibleRegion::unconstrained());
  par::SolverConfig cfg;
  cfg.threads = 2;
  cfg.tolerance = 1e-10;
  cfg.max_epochs = 50;
  const par::SolveResult one = par::solve_syngd(id, cfg);
  CHECK(one.stats.tolerance_reached);
  CHECK(one.stats.epochs == 1);
  for (double v : one.x) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

  // Strict residual descent on a generic instance.
  const QuadraticProblem p = small_qp(19, 25, false);
  cfg.tolerance = 1e-12;
  cfg.max_epochs = 200;
  const par::SolveResult r = par::solve_syngd(p, cfg);
  for (std::size_t i = 0; i + 1 < r.trace.points.size(); ++i) {
    const double a = r.trace.points[i].residual;
    const double b = r.trace.points[i + 1].residual;
    if (a > 1e-12) CHECK(b < a);
  }

  // Box instance: stays feasible and reaches tolerance.
  const QuadraticProblem pb = small_qp(23, 25, true);
  cfg.tolerance = 1e-8;
  cfg.max_epochs = 2000;
  const par::SolveResult rb = par::solve_syngd(pb, cfg);
  CHECK(rb.stats.tolerance_reached);
  CHECK(pb.region().contains(rb.x));
}

TEST_CASE("speedup measurement bookkeeping") {
  const QuadraticProblem p = small_qp(29, 60, false);
  par::SolverConfig cfg;
  cfg.gamma = 1.0;
  cfg.tolerance = 1e-5;
  cfg.max_epochs = 300;
  cfg.seed = 11;
  const auto rows = par::measure_speedup(p, cfg, {1, 2}, 3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].threads == 1);
  CHECK(rows[0].reached);
  CHECK(rows[0].speedup == 1.0);
  CHECK(rows[1].reached);
  CHECK(std::isfinite(rows[1].speedup));

  // Rows that miss the tolerance are flagged and carry no speedup.
  cfg.max_epochs = 1;
  cfg.tolerance = 1e-15;
  const auto flagged = par::measure_speedup(p, cfg, {1}, 2);
  CHECK(!flagged[0].reached);
  CHECK(!std::isfinite(flagged[0].speedup));
}

TEST_CASE("solver configuration validation") {
  const QuadraticProblem p = small_qp(31, 10, false);
  par::SolverConfig cfg;
  cfg.threads = 0;
  CHECK_THROWS_AS(par::solve_async(p, cfg), std::invalid_argument);
  cfg.threads = 1;
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(par::solve_async(p, cfg), std::invalid_argument);
  cfg.tolerance = 1e-5;
  cfg.x0 = Vec(3, 0.0);  // wrong dimension
  CHECK_THROWS_AS(par::solve_async(p, cfg), std::invalid_argument);
}
