#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asyscd/prng.hpp"
#include "asyscd/problem.hpp"
#include "oracles.hpp"

using namespace asyscd;

namespace {

QuadraticProblem make_dense(std::size_t n, Vec q, Vec c,
                            FeasibleRegion region = FeasibleRegion::unconstrained()) {
  return QuadraticProblem(Hessian::dense(n, std::move(q)), std::move(c), std::move(region));
}

QuadraticProblem random_strictly_convex(std::uint64_t seed, std::size_t n, double ridge) {
  rng::GaussianStream gs(seed);
  const std::size_t k = n + 3;
  std::vector<double> b(k * n);
  for (double& v : b) v = gs.next();
  Vec q(n * n, 0.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) q[i * n + j] += b[r * n + i] * b[r * n + j] / k;
  for (std::size_t i = 0; i < n; ++i) {
    q[i * n + i] += ridge;
    for (std::size_t j = i + 1; j < n; ++j) q[j * n + i] = q[i * n + j];
  }
  Vec c(n);
  for (double& v : c) v = gs.next();
  return make_dense(n, std::move(q), std::move(c));
}

}  // namespace

TEST_CASE("objective on small instances") {
  const auto p1 = make_dense(2, {1, 0, 0, 1}, {0, 0});
  CHECK(objective(p1, {0, 0}) == 0.0);
  CHECK(objective(p1, {3, 4}) == 12.5);

  const auto p2 = make_dense(2, {2, 1, 1, 2}, {-1, -1});
  CHECK(objective(p2, {1, 1}) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(objective(p1, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("gradient and coordinate gradient") {
  const auto p1 = make_dense(2, {1, 0, 0, 1}, {0, 0});
  const Vec g1 = gradient(p1, {3, 4});
  CHECK(g1[0] == 3.0);
  CHECK(g1[1] == 4.0);

  const auto p2 = make_dense(2, {2, 1, 1, 2}, {-1, -1});
  const Vec g2 = gradient(p2, {1, 0});
  CHECK(g2[0] == 1.0);
  CHECK(g2[1] == 0.0);

  CHECK_THROWS_AS(coordinate_gradient(p2, {1, 0}, 2), std::out_of_range);

  // Gradient vanishes at the dense-solve minimizer.
  const auto p = random_strictly_convex(11, 8, 0.7);
  Vec rhs = p.linear();
  for (double& v : rhs) v = -v;
  const Vec xstar = oracles::gauss_solve(8, p.hessian().to_dense(), rhs);
  for (double gi : gradient(p, xstar)) CHECK(std::abs(gi) <= 1e-10);
}

TEST_CASE("coordinate gradient equals full gradient componentwise, bit for bit") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + rng::uniform_index(seed, 7, 15);
    const auto p = random_strictly_convex(seed, n, 0.4);
    Vec x(n);
    rng::GaussianStream gs(seed + 100);
    for (double& v : x) v = gs.next();
    const Vec g = gradient(p, x);
    for (std::size_t i = 0; i < n; ++i) CHECK(coordinate_gradient(p, x, i) == g[i]);
  }
}

TEST_CASE("gradient matches central finite differences") {
  const double h = 1e-6;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + rng::uniform_index(seed, 3, 19);
    const auto p = random_strictly_convex(seed, n, 0.3);
    Vec x(n);
    rng::GaussianStream gs(seed + 7);
    for (double& v : x) v = gs.next();
    for (std::size_t i = 0; i < n; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (objective(p, xp) - objective(p, xm)) / (2 * h);
      const double gi = coordinate_gradient(p, x, i);
      CHECK(std::abs(fd - gi) <= 1e-6 * std::max(1.0, std::abs(gi)));
    }
  }
}

TEST_CASE("projection clips, is idempotent, identity when unconstrained") {
  const auto box = FeasibleRegion::unit_box(2);
  const Vec clipped = project(box, {-0.5, 2.0});
  CHECK(clipped[0] == 0.0);
  CHECK(clipped[1] == 1.0);
  const Vec inside = project(box, {0.25, 0.75});
  CHECK(inside[0] == 0.25);
  CHECK(inside[1] == 0.75);

  const auto unc = FeasibleRegion::unconstrained();
  const Vec same = project(unc, {-7.0, 3.0});
  CHECK(same[0] == -7.0);
  CHECK(same[1] == 3.0);

  CHECK_THROWS_AS(FeasibleRegion::box({1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("projection is nonexpansive") {
  rng::GaussianStream gs(99);
  const std::size_t n = 6;
  Vec lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = (i % 3 == 0) ? -kInf : -std::abs(gs.next());
    hi[i] = (i % 4 == 0) ? kInf : std::abs(gs.next());
    if (lo[i] > hi[i]) std::swap(lo[i], hi[i]);
  }
  const auto box = FeasibleRegion::box(lo, hi);
  for (int t = 0; t < 1000; ++t) {
    Vec x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 3 * gs.next();
      y[i] = 3 * gs.next();
    }
    const Vec px = project(box, x), py = project(box, y);
    double dxy = 0, dp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dxy += (x[i] - y[i]) * (x[i] - y[i]);
      dp += (px[i] - py[i]) * (px[i] - py[i]);
    }
    CHECK(dp <= dxy * (1 + 1e-12));
    // idempotence
    const Vec ppx = project(box, px);
    for (std::size_t i = 0; i < n; ++i) CHECK(ppx[i] == px[i]);
  }
}

TEST_CASE("unconstrained behaves as a box with infinite bounds") {
  const std::size_t n = 4;
  const auto p = random_strictly_convex(5, n, 0.5);
  const QuadraticProblem boxed(Hessian::dense(n, p.hessian().to_dense()), p.linear(),
                               FeasibleRegion::box(Vec(n, -kInf), Vec(n, kInf)));
  Vec x = {1.0, -2.0, 0.5, 3.0};
  CHECK(residual(p, x) == residual(boxed, x));
  const Vec a = project(p.region(), x), b = project(boxed.region(), x);
  for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("lipschitz constants for explicit matrices") {
  const auto id = compute_lipschitz(Hessian::dense(2, {1, 0, 0, 1}));
  CHECK(id.per_coordinate[0] == 1.0);
  CHECK(id.per_coordinate[1] == 1.0);
  CHECK(id.l_max == 1.0);
  CHECK(id.l_res == 1.0);

  const auto lc = compute_lipschitz(Hessian::dense(2, {2, 1, 1, 2}));
  CHECK(lc.l_max == 2.0);
  CHECK(lc.l_res == doctest::Approx(2.2360679774997896).epsilon(1e-15));

  CHECK_THROWS_AS(compute_lipschitz(Hessian::dense(2, {0, 0, 0, 1})), std::invalid_argument);
}

TEST_CASE("lipschitz ratio bounds over random instances") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + rng::uniform_index(seed, 2, 30);
    const auto p = random_strictly_convex(seed, n, 0.2);
    const auto& lc = p.lipschitz();
    CHECK(lc.l_res >= lc.l_max);
    CHECK(lc.l_res <= std::sqrt(static_cast<double>(n)) * lc.l_max * (1 + 1e-12));
  }
}

TEST_CASE("construction rejects asymmetric and non-positive-diagonal matrices") {
  CHECK_THROWS_AS(make_dense(2, {1, 0.5, 0.25, 1}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(make_dense(2, {1, 0, 0, 0}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(make_dense(2, {1, 0, 0, -1}, {0, 0}), std::invalid_argument);
}

TEST_CASE("estimate_modulus") {
  const auto id = make_dense(2, {1, 0, 0, 1}, {0, 0});
  const auto est = estimate_modulus(id);
  CHECK(est.known);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-8));

  // Ridge hint wins when present.
  const QuadraticProblem hinted(Hessian::dense(2, {3, 0, 0, 3}), {0, 0},
                                FeasibleRegion::unconstrained(), std::nullopt, 0.5, true);
  const auto est2 = estimate_modulus(hinted);
  CHECK(est2.known);
  CHECK(est2.value == 0.5);

  // Iteration estimate agrees with the Jacobi oracle.
  const auto p = random_strictly_convex(21, 10, 0.3);
  const double oracle = oracles::min_eigenvalue(10, p.hessian().to_dense());
  const auto est3 = estimate_modulus(p);
  CHECK(est3.known);
  CHECK(est3.value == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("residual definitions") {
  const auto p = make_dense(2, {1, 0, 0, 1}, {0, 0});
  CHECK(residual(p, {3, 4}) == 5.0);

  // Box [0,1]^n with c >= 0: the origin is optimal.
  const std::size_t n = 4;
  Vec q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  const QuadraticProblem boxed(Hessian::dense(n, std::move(q)), Vec(n, 1.0),
                               FeasibleRegion::unit_box(n));
  CHECK(residual(boxed, Vec(n, 0.0)) == 0.0);

  // Unconstrained residual vanishes at the closed-form minimizer.
  const auto pr = random_strictly_convex(33, 12, 0.6);
  Vec rhs = pr.linear();
  for (double& v : rhs) v = -v;
  const Vec xstar = oracles::gauss_solve(12, pr.hessian().to_dense(), rhs);
  CHECK(residual(pr, xstar) <= 1e-10);
}

TEST_CASE("residual zero iff fixed point of the projected gradient map") {
  const std::size_t n = 5;
  const auto p = random_strictly_convex(44, n, 0.8);
  const QuadraticProblem boxed(Hessian::dense(n, p.hessian().to_dense()), p.linear(),
                               FeasibleRegion::uniform_box(n, -0.2, 0.2));
  const OptimumEstimate opt = estimate_optimum(boxed, 1e-13);
  CHECK(residual(boxed, opt.x) <= 1e-12);
  // Fixed point: one projected-gradient application does not move x*.
  Vec moved(n);
  for (std::size_t i = 0; i < n; ++i)
    moved[i] = boxed.region().clip(i, opt.x[i] - coordinate_gradient(boxed, opt.x, i));
  double dist = 0;
  for (std::size_t i = 0; i < n; ++i) dist += (moved[i] - opt.x[i]) * (moved[i] - opt.x[i]);
  CHECK(std::sqrt(dist) <= 1e-12);
  // And a non-fixed point has positive residual.
  Vec interior(n, 0.11);
  CHECK(residual(boxed, interior) > 0.0);
}

TEST_CASE("full_prox_step") {
  const std::size_t n = 3;
  const auto p = random_strictly_convex(55, n, 0.5);
  Vec x = {0.3, -0.2, 0.1};
  const double gamma = 0.7;

  // Unconstrained: plain scaled gradient step.
  const Vec xbar = full_prox_step(p, x, x, gamma);
  const double step = gamma / p.lipschitz().l_max;
  for (std::size_t i = 0; i < n; ++i)
    CHECK(xbar[i] == x[i] - step * coordinate_gradient(p, x, i));

  // Interior point of a wide box: constraints inactive.
  const QuadraticProblem boxed(Hessian::dense(n, p.hessian().to_dense()), p.linear(),
                               FeasibleRegion::uniform_box(n, -100.0, 100.0));
  const Vec xbar2 = full_prox_step(boxed, x, x, gamma);
  for (std::size_t i = 0; i < n; ++i) CHECK(xbar2[i] == xbar[i]);

  // At the solution the trial point does not move.
  const QuadraticProblem tight(Hessian::dense(n, p.hessian().to_dense()), p.linear(),
                               FeasibleRegion::uniform_box(n, -0.2, 0.2));
  const OptimumEstimate opt = estimate_optimum(tight, 1e-13);
  const Vec fixed = full_prox_step(tight, opt.x, opt.x, gamma);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(fixed[i] - opt.x[i]) <= 1e-12);

  CHECK_THROWS_AS(full_prox_step(p, x, x, 0.0), std::invalid_argument);
}

TEST_CASE("gradient norm dominates the squared-gap bound on strictly convex instances") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + rng::uniform_index(seed, 5, 9);
    const auto p = random_strictly_convex(seed, n, 0.25);
    const double l = oracles::min_eigenvalue(n, p.hessian().to_dense());
    REQUIRE(l > 0.0);
    Vec rhs = p.linear();
    for (double& v : rhs) v = -v;
    const Vec xstar = oracles::gauss_solve(n, p.hessian().to_dense(), rhs);
    const double fstar = objective(p, xstar);
    Vec x(n);
    rng::GaussianStream gs(seed + 500);
    for (double& v : x) v = gs.next();
    double gnorm2 = 0.0;
    for (double gi : gradient(p, x)) gnorm2 += gi * gi;
    const double gap = objective(p, x) - fstar;
    CHECK(gnorm2 >= 2.0 * l * gap * (1 - 1e-9));
  }
}

TEST_CASE("sparse and dense storage agree") {
  // Tridiagonal matrix, sparse enough to fall under the density threshold.
  const std::size_t n = 20;
  Vec dense(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    dense[i * n + i] = 2.0;
    if (i + 1 < n) dense[i * n + i + 1] = dense[(i + 1) * n + i] = -0.5;
  }
  const Hessian hd = Hessian::dense(n, dense);
  const Hessian hs = Hessian::from_dense_auto(n, dense);
  CHECK(!hs.is_dense());
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 ? -1.0 : 1.0) * (1.0 + i);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(hd.row_dot(i, x.data()) == hs.row_dot(i, x.data()));
    CHECK(hd.row_norm(i) == hs.row_norm(i));
    CHECK(hd.diag(i) == hs.diag(i));
  }
  CHECK(hd.quad_form(x.data()) == hs.quad_form(x.data()));
  CHECK(hs.stored_nonzeros() == 3 * n - 2);

  // Dense row zeros contribute nothing, so the dots agree exactly even
  // though the sparse walk skips them.
  CHECK(Hessian::from_dense_auto(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1})
            .is_dense() == false);
}

TEST_CASE("estimate_optimum matches the oracle solve") {
  const std::size_t n = 10;
  const auto p = random_strictly_convex(77, n, 0.4);
  const OptimumEstimate est = estimate_optimum(p);
  CHECK(est.closed_form);
  Vec rhs = p.linear();
  for (double& v : rhs) v = -v;
  const Vec xstar = oracles::gauss_solve(n, p.hessian().to_dense(), rhs);
  for (std::size_t i = 0; i < n; ++i) CHECK(est.x[i] == doctest::Approx(xstar[i]).epsilon(1e-9));
  CHECK(est.residual <= 1e-8);
}
