#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "asyscd/problem.hpp"

// The four test-problem families: synthetic regularized least squares
// (unconstrained and box-constrained), vertex-cover penalty problems, and
// kernel SVM duals.

namespace asyscd::gen {

struct SyntheticSpec {
  std::size_t m = 1;       // rows of A
  std::size_t n = 1;       // columns of A / problem dimension
  double alpha = 0.5;      // ridge term
  std::uint64_t seed = 0;
  bool constrained = false;  // box variant over the nonnegative orthant
};

struct GraphSpec {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // compacted, deduplicated
  std::size_t vertices = 0;
  double beta = 5.0;

  // Compacts vertex ids, drops duplicate (unordered) edges, rejects self-loops.
  static GraphSpec from_edges(
      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& raw_edges, double beta);
};

struct SvmSample {
  std::vector<std::pair<std::uint32_t, double>> features;  // sorted by index
  int label = 1;                                           // +1 or -1
};

struct SvmSpec {
  std::vector<SvmSample> samples;
  double box_upper = 1.0;      // dual bound C
  std::size_t dense_cap = 5000;  // refuse to materialize Q beyond this
};

// min 1/2 ||Ax-b||^2 + alpha/2 ||x||^2 with unit-norm columns of A, or its
// box-constrained variant 1/2 (x - xt)^T (A^T A + alpha I)(x - xt) on x >= 0.
QuadraticProblem gen_synthetic_qp(const SyntheticSpec& spec);

// Quadratic-penalty form of the vertex-cover LP relaxation on [0,1]^n with
// n = |V| + |E| (vertex variables first, then edge slacks).
QuadraticProblem gen_vertex_cover(const GraphSpec& spec);

// Dual of the kernel SVM with homogeneous quadratic kernel (x_i^T x_j)^2,
// no intercept, on the box [0, C]^N.
QuadraticProblem gen_svm_dual(const SvmSpec& spec);

// Uniform random simple graph with |V| = vertices and exactly `edges`
// distinct edges; stands in for web-scale graphs at desk scale.
GraphSpec random_graph(std::size_t vertices, std::size_t edges, double beta,
                       std::uint64_t seed);

}  // namespace asyscd::gen
