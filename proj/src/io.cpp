#include "asyscd/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace asyscd::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return in;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // "+1" labels
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad real value: '" + std::string(s) + "'");
  return v;
}

namespace {

std::uint64_t parse_index(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad index: '" + std::string(s) + "'");
  return v;
}

}  // namespace

void save_problem(const QuadraticProblem& p, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  const std::size_t n = p.n();
  const Hessian& q = p.hessian();

  std::size_t nnz = 0;
  for (std::size_t i = 0; i < n; ++i)
    q.visit_row(i, [&](std::size_t, double) { ++nnz; });

  out << "qp " << n << ' ' << nnz << ' ' << (p.region().is_box() ? "box" : "unc") << '\n';
  out << 'c';
  for (std::size_t i = 0; i < n; ++i) out << ' ' << format_double(p.linear()[i]);
  out << '\n';
  for (std::size_t i = 0; i < n; ++i)
    q.visit_row(i, [&](std::size_t j, double v) {
      out << i << ' ' << j << ' ' << format_double(v) << '\n';
    });
  if (p.region().is_box()) {
    out << "bounds\n";
    for (std::size_t i = 0; i < n; ++i)
      out << format_double(p.region().lower[i]) << ' ' << format_double(p.region().upper[i])
          << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

QuadraticProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;

  const auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!split_ws(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(path, lineno, "empty problem file");
  auto header = split_ws(line);
  if (header.size() != 4 || header[0] != "qp")
    throw ParseError(path, lineno, "expected header 'qp <n> <nnz> <unc|box>'");
  std::size_t n = 0, nnz = 0;
  bool box = false;
  try {
    n = parse_index(header[1]);
    nnz = parse_index(header[2]);
    if (header[3] == "box")
      box = true;
    else if (header[3] != "unc")
      throw std::invalid_argument("region must be 'unc' or 'box'");
  } catch (const std::exception& e) {
    throw ParseError(path, lineno, e.what());
  }

  if (!next_line()) throw ParseError(path, lineno, "missing linear-term line");
  auto cparts = split_ws(line);
  if (cparts.size() != n + 1 || cparts[0] != "c")
    throw ParseError(path, lineno, "expected 'c' followed by " + std::to_string(n) + " reals");
  Vec c(n);
  try {
    for (std::size_t i = 0; i < n; ++i) c[i] = parse_double(cparts[i + 1]);
  } catch (const std::exception& e) {
    throw ParseError(path, lineno, e.what());
  }

  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_line()) throw ParseError(path, lineno, "expected " + std::to_string(nnz) +
                                                         " matrix entries");
    auto parts = split_ws(line);
    if (parts.size() != 3) throw ParseError(path, lineno, "expected 'i j value'");
    try {
      const std::size_t i = parse_index(parts[0]);
      const std::size_t j = parse_index(parts[1]);
      if (i >= n || j >= n) throw std::invalid_argument("entry index out of range");
      rows[i].push_back({static_cast<std::uint32_t>(j), parse_double(parts[2])});
    } catch (const std::exception& e) {
      throw ParseError(path, lineno, e.what());
    }
  }

  FeasibleRegion region = FeasibleRegion::unconstrained();
  if (box) {
    // The bounds section may be omitted (all intervals infinite).
    Vec lo(n, -kInf), hi(n, kInf);
    if (next_line()) {
      auto parts = split_ws(line);
      if (parts.size() == 1 && parts[0] == "bounds") {
        if (!next_line()) throw ParseError(path, lineno, "missing bound lines");
        parts = split_ws(line);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (parts.size() != 2) throw ParseError(path, lineno, "expected 'lo hi'");
        try {
          lo[i] = parse_double(parts[0]);
          hi[i] = parse_double(parts[1]);
        } catch (const std::exception& e) {
          throw ParseError(path, lineno, e.what());
        }
        if (i + 1 < n) {
          if (!next_line()) throw ParseError(path, lineno, "missing bound lines");
          parts = split_ws(line);
        }
      }
    }
    try {
      region = FeasibleRegion::box(std::move(lo), std::move(hi));
    } catch (const std::exception& e) {
      throw ParseError(path, lineno, e.what());
    }
  }

  // Assemble CSR (sorted, deduplicated) and pick the storage mode by density.
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::uint32_t> cols;
  Vec vals;
  std::size_t stored = 0;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    stored += row.size();
  }
  cols.reserve(stored);
  vals.reserve(stored);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      if (k > 0 && rows[i][k].first == rows[i][k - 1].first)
        throw ParseError(path, lineno, "duplicate matrix entry in row " + std::to_string(i));
      cols.push_back(rows[i][k].first);
      vals.push_back(rows[i][k].second);
    }
    row_ptr[i + 1] = cols.size();
  }

  try {
    Hessian h = Hessian::csr(n, std::move(row_ptr), std::move(cols), std::move(vals));
    if (4 * h.stored_nonzeros() > n * n) h = Hessian::dense(n, h.to_dense());
    return QuadraticProblem(std::move(h), std::move(c), std::move(region));
  } catch (const std::exception& e) {
    throw ParseError(path, lineno, e.what());
  }
}

gen::GraphSpec load_edge_list(const std::filesystem::path& path, double beta) {
  std::ifstream in = open_in(path);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto parts = split_ws(line);
    if (parts.empty()) continue;
    if (parts.size() != 2) throw ParseError(path, lineno, "expected 'u v'");
    try {
      raw.push_back({parse_index(parts[0]), parse_index(parts[1])});
    } catch (const std::exception& e) {
      throw ParseError(path, lineno, e.what());
    }
    if (raw.back().first == raw.back().second)
      throw ParseError(path, lineno, "self-loop is not allowed");
  }
  if (raw.empty()) throw ParseError(path, lineno, "no edges in file");
  return gen::GraphSpec::from_edges(raw, beta);
}

gen::SvmSpec load_libsvm(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  gen::SvmSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto parts = split_ws(line);
    if (parts.empty()) continue;
    gen::SvmSample sample;
    try {
      const double label = parse_double(parts[0]);
      if (label != 1.0 && label != -1.0)
        throw std::invalid_argument("label must be +1 or -1");
      sample.label = label > 0 ? 1 : -1;
      for (std::size_t k = 1; k < parts.size(); ++k) {
        const auto colon = parts[k].find(':');
        if (colon == std::string_view::npos)
          throw std::invalid_argument("expected 'index:value'");
        const std::uint64_t idx = parse_index(parts[k].substr(0, colon));
        if (idx == 0) throw std::invalid_argument("feature indices are 1-based");
        const double val = parse_double(parts[k].substr(colon + 1));
        sample.features.push_back({static_cast<std::uint32_t>(idx - 1), val});
      }
    } catch (const std::exception& e) {
      throw ParseError(path, lineno, e.what());
    }
    std::sort(sample.features.begin(), sample.features.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < sample.features.size(); ++k)
      if (sample.features[k].first == sample.features[k - 1].first)
        throw ParseError(path, lineno, "duplicate feature index");
    spec.samples.push_back(std::move(sample));
  }
  return spec;
}

void write_trace_csv(const std::filesystem::path& path, const sim::Trace& trace,
                     std::optional<double> f_star, const theory::RateEnvelope* linear,
                     const theory::RateEnvelope* sublinear) {
  std::ofstream out = open_out(path);
  out << "j,epoch,residual,objective,gap,envelope_linear,envelope_sublinear\n";
  for (const sim::Checkpoint& c : trace.points) {
    out << c.step << ',' << format_double(c.epoch) << ',' << format_double(c.residual) << ','
        << format_double(c.objective) << ',';
    if (f_star) out << format_double(c.objective - *f_star);
    out << ',';
    if (linear) out << format_double(theory::evaluate_envelope(*linear, c.step));
    out << ',';
    if (sublinear) out << format_double(theory::evaluate_envelope(*sublinear, c.step));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& path, const ManifestInfo& info) {
  nlohmann::json j;
  j["tool"] = "asyscd";
  j["version"] = "1.0.0";
  const auto now = std::chrono::system_clock::now();
  j["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  j["subcommand"] = info.subcommand;
  if (!info.problem_source.empty()) j["problem"] = info.problem_source;
  j["seed"] = info.seed;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : info.params) params[k] = v;
  j["params"] = params;
  j["outputs"] = info.outputs;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace asyscd::io
