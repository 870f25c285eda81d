#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "asyscd/generators.hpp"
#include "asyscd/problem.hpp"
#include "asyscd/simulator.hpp"
#include "asyscd/theory.hpp"

namespace asyscd::io {

struct ParseError : std::runtime_error {
  ParseError(const std::filesystem::path& path, std::size_t line, const std::string& msg)
      : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + msg),
        line_number(line) {}
  std::size_t line_number;
};

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);  // accepts inf/-inf/+inf

// Text problem format:
//   qp <n> <nnz> <unc|box>
//   c <n reals>
//   <nnz lines: i j value>          (0-based, both triangles present)
//   bounds                          (box only)
//   <n lines: lo hi>                (-inf/inf allowed)
void save_problem(const QuadraticProblem& p, const std::filesystem::path& path);
QuadraticProblem load_problem(const std::filesystem::path& path);

// Whitespace-separated "u v" edge lines; '#' starts a comment;
// duplicate edges are dropped.
gen::GraphSpec load_edge_list(const std::filesystem::path& path, double beta);

// LIBSVM lines "label idx:val ..." with 1-based indices; labels must be +-1.
gen::SvmSpec load_libsvm(const std::filesystem::path& path);

// Trace CSV: j,epoch,residual,objective,gap,envelope_linear,envelope_sublinear.
// Optional columns are left empty when unavailable.
void write_trace_csv(const std::filesystem::path& path, const sim::Trace& trace,
                     std::optional<double> f_star = std::nullopt,
                     const theory::RateEnvelope* linear = nullptr,
                     const theory::RateEnvelope* sublinear = nullptr);

// Reproduction manifest written next to every output artifact.
struct ManifestInfo {
  std::string subcommand;
  std::string problem_source;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
};
void write_manifest(const std::filesystem::path& path, const ManifestInfo& info);

}  // namespace asyscd::io
