#include "asyscd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "asyscd/linalg.hpp"
#include "asyscd/prng.hpp"

namespace asyscd::gen {

namespace {
constexpr std::uint64_t kSaltA = 0xA11CE;
constexpr std::uint64_t kSaltModel = 0xB0B;
constexpr std::uint64_t kSaltNoise = 0xCAFE;
constexpr std::uint64_t kSaltGraph = 0x6AF;
}  // namespace

QuadraticProblem gen_synthetic_qp(const SyntheticSpec& spec) {
  const std::size_t m = spec.m, n = spec.n;
  if (m < 1 || n < 1) throw std::invalid_argument("gen_synthetic_qp: m, n must be >= 1");
  if (spec.alpha < 0.0) throw std::invalid_argument("gen_synthetic_qp: alpha must be >= 0");

  // A row-major, entries N(0,1), then each column scaled to unit norm.
  Vec a(m * n);
  {
    rng::GaussianStream gs(rng::derive(spec.seed, kSaltA));
    for (double& v : a) v = gs.next();
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += a[r * n + j] * a[r * n + j];
    const double norm = std::sqrt(s);
    if (norm == 0.0) throw std::runtime_error("gen_synthetic_qp: zero column");
    for (std::size_t r = 0; r < m; ++r) a[r * n + j] /= norm;
  }

  Vec xt(n);
  {
    rng::GaussianStream gs(rng::derive(spec.seed, kSaltModel));
    for (double& v : xt) v = gs.next();
  }

  // Q = A^T A + alpha I.
  Vec q(n * n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const double* row = a.data() + r * n;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = row[i];
      double* qrow = q.data() + i * n;
      for (std::size_t j = i; j < n; ++j) qrow[j] += ai * row[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    q[i * n + i] += spec.alpha;
    for (std::size_t j = i + 1; j < n; ++j) q[j * n + i] = q[i * n + j];
  }

  Vec c(n, 0.0);
  std::optional<double> optimum;
  FeasibleRegion region = FeasibleRegion::unconstrained();

  if (!spec.constrained) {
    // b = A xt + delta * ||A xt|| / (5m); c = -A^T b.
    Vec ax(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      const double* row = a.data() + r * n;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * xt[j];
      ax[r] = s;
    }
    double ax_norm = 0.0;
    for (double v : ax) ax_norm += v * v;
    ax_norm = std::sqrt(ax_norm);
    const double noise_scale = ax_norm / (5.0 * static_cast<double>(m));
    Vec b(m);
    {
      rng::GaussianStream gs(rng::derive(spec.seed, kSaltNoise));
      for (std::size_t r = 0; r < m; ++r) b[r] = ax[r] + gs.next() * noise_scale;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s -= a[r * n + j] * b[r];
      c[j] = s;
    }
    // Closed-form optimum for the strictly convex case at moderate size.
    if (spec.alpha > 0.0 && n <= 2000) {
      Vec rhs = c;
      for (double& v : rhs) v = -v;
      const Vec xstar = linalg::dense_solve(n, q, std::move(rhs));
      double val = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += q[i * n + j] * xstar[j];
        val += 0.5 * xstar[i] * s + c[i] * xstar[i];
      }
      optimum = val;
    }
  } else {
    // 1/2 (x - xt)^T Q (x - xt) over the nonnegative orthant: c = -Q xt.
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      const double* qrow = q.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) s += qrow[j] * xt[j];
      c[i] = -s;
    }
    region = FeasibleRegion::nonnegative(n);
  }

  std::optional<double> modulus;
  if (spec.alpha > 0.0) modulus = spec.alpha;
  return QuadraticProblem(Hessian::from_dense_auto(n, q), std::move(c), std::move(region),
                          optimum, modulus, /*psd_certified=*/true);
}

GraphSpec GraphSpec::from_edges(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& raw_edges, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("GraphSpec: beta must be positive");
  if (raw_edges.empty()) throw std::invalid_argument("GraphSpec: edge list is empty");
  std::map<std::uint64_t, std::uint32_t> compact;
  for (const auto& [u, v] : raw_edges) {
    if (u == v)
      throw std::invalid_argument("GraphSpec: self-loop at vertex " + std::to_string(u));
    compact.emplace(u, 0);
    compact.emplace(v, 0);
  }
  std::uint32_t next = 0;
  for (auto& [orig, id] : compact) id = next++;

  GraphSpec spec;
  spec.beta = beta;
  spec.vertices = compact.size();
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& [u, v] : raw_edges) {
    const std::uint32_t cu = compact.at(u), cv = compact.at(v);
    const auto key = std::minmax(cu, cv);
    if (seen.insert(key).second) spec.edges.push_back(key);
  }
  return spec;
}

QuadraticProblem gen_vertex_cover(const GraphSpec& spec) {
  if (spec.edges.empty()) throw std::invalid_argument("gen_vertex_cover: no edges");
  if (!(spec.beta > 0.0)) throw std::invalid_argument("gen_vertex_cover: beta must be positive");
  const std::size_t nv = spec.vertices;
  const std::size_t ne = spec.edges.size();
  const std::size_t n = nv + ne;
  const double beta = spec.beta;
  const double inv_beta = 1.0 / beta;

  // Constraint matrix A has one row per edge: +1 at both endpoints, -1 at
  // the edge slack. Q = beta A^T A + (1/beta) I.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
  std::vector<std::uint32_t> degree(nv, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto [u, v] = spec.edges[e];
    if (u >= nv || v >= nv)
      throw std::invalid_argument("gen_vertex_cover: edge endpoint out of range");
    const auto s = static_cast<std::uint32_t>(nv + e);
    ++degree[u];
    ++degree[v];
    rows[u].push_back({v, beta});
    rows[v].push_back({u, beta});
    rows[u].push_back({s, -beta});
    rows[v].push_back({s, -beta});
    rows[s].push_back({u, -beta});
    rows[s].push_back({v, -beta});
  }
  for (std::size_t u = 0; u < nv; ++u)
    rows[u].push_back({static_cast<std::uint32_t>(u), beta * degree[u] + inv_beta});
  for (std::size_t e = 0; e < ne; ++e) {
    const auto s = static_cast<std::uint32_t>(nv + e);
    rows[s].push_back({s, beta + inv_beta});
  }

  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::uint32_t> cols;
  Vec vals;
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [j, v] : row) {
      cols.push_back(j);
      vals.push_back(v);
    }
    row_ptr[i + 1] = cols.size();
  }

  Vec c(n, 0.0);
  for (std::size_t u = 0; u < nv; ++u) c[u] = 1.0;

  return QuadraticProblem(Hessian::csr(n, std::move(row_ptr), std::move(cols), std::move(vals)),
                          std::move(c), FeasibleRegion::unit_box(n), std::nullopt,
                          /*modulus_hint=*/inv_beta, /*psd_certified=*/true);
}

QuadraticProblem gen_svm_dual(const SvmSpec& spec) {
  const std::size_t count = spec.samples.size();
  if (count < 2) throw std::invalid_argument("gen_svm_dual: needs at least two samples");
  if (count > spec.dense_cap)
    throw std::invalid_argument("gen_svm_dual: " + std::to_string(count) +
                                " samples exceed the dense cap of " +
                                std::to_string(spec.dense_cap) + "; subsample the data first");
  if (!(spec.box_upper > 0.0)) throw std::invalid_argument("gen_svm_dual: C must be positive");

  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < count; ++i) {
    const SvmSample& s = spec.samples[i];
    if (s.label != 1 && s.label != -1)
      throw std::invalid_argument("gen_svm_dual: labels must be +1 or -1");
    if (s.features.empty())
      throw std::invalid_argument("gen_svm_dual: sample " + std::to_string(i) +
                                  " has no features (zero kernel diagonal)");
    for (std::size_t k = 1; k < s.features.size(); ++k)
      if (s.features[k].first <= s.features[k - 1].first)
        throw std::invalid_argument("gen_svm_dual: feature indices must be sorted and unique");
    has_pos = has_pos || s.label == 1;
    has_neg = has_neg || s.label == -1;
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("gen_svm_dual: both classes must be present");

  const auto sparse_dot = [](const SvmSample& a, const SvmSample& b) {
    double s = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.features.size() && ib < b.features.size()) {
      const auto ja = a.features[ia].first, jb = b.features[ib].first;
      if (ja == jb) {
        s += a.features[ia].second * b.features[ib].second;
        ++ia;
        ++ib;
      } else if (ja < jb) {
        ++ia;
      } else {
        ++ib;
      }
    }
    return s;
  };

  Vec q(count * count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      const double dot = sparse_dot(spec.samples[i], spec.samples[j]);
      const double v = spec.samples[i].label * spec.samples[j].label * dot * dot;
      q[i * count + j] = v;
      q[j * count + i] = v;
    }
  }

  return QuadraticProblem(Hessian::dense(count, std::move(q)), Vec(count, -1.0),
                          FeasibleRegion::uniform_box(count, 0.0, spec.box_upper),
                          std::nullopt, std::nullopt, /*psd_certified=*/true);
}

GraphSpec random_graph(std::size_t vertices, std::size_t edges, double beta,
                       std::uint64_t seed) {
  if (vertices < 2) throw std::invalid_argument("random_graph: needs at least two vertices");
  const std::size_t max_edges = vertices * (vertices - 1) / 2;
  if (edges < 1 || edges > max_edges)
    throw std::invalid_argument("random_graph: edge count out of range");
  const std::uint64_t key = rng::derive(seed, kSaltGraph);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::uint64_t ctr = 0;
  while (raw.size() < edges) {
    const auto u = static_cast<std::uint32_t>(rng::uniform_index(key, ctr++, vertices));
    const auto v = static_cast<std::uint32_t>(rng::uniform_index(key, ctr++, vertices));
    if (u == v) continue;
    const auto e = std::minmax(u, v);
    if (seen.insert(e).second) raw.push_back({e.first, e.second});
  }
  return GraphSpec::from_edges(raw, beta);
}

}  // namespace asyscd::gen
