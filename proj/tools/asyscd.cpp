// Command-line harness: generate problem instances, run the solvers and the
// simulator, compute steplength plans and rate envelopes, benchmark thread
// scaling, and execute the verification suites.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asyscd/generators.hpp"
#include "asyscd/io.hpp"
#include "asyscd/problem.hpp"
#include "asyscd/simulator.hpp"
#include "asyscd/solver.hpp"
#include "asyscd/theory.hpp"
#include "asyscd/verify.hpp"

namespace fs = std::filesystem;
using namespace asyscd;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool quiet = false;
};

std::ostream& info(const GlobalOpts& g) {
  static std::ostream null_stream(nullptr);
  return g.quiet ? null_stream : std::cout;
}

fs::path out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void emit_manifest(const GlobalOpts& g, const fs::path& artifact, io::ManifestInfo info_) {
  (void)g;
  info_.outputs.push_back(artifact.string());
  io::write_manifest(artifact.string() + ".manifest.json", info_);
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  // qp
  std::size_t m = 600, n = 2000;
  double alpha = 0.5;
  bool constrained = false;
  // vc
  std::string edges_file;
  std::size_t random_vertices = 0, random_edges = 0;
  double beta = 5.0;
  // svm
  std::string svm_file;
  double svm_c = 1.0;
  std::size_t svm_cap = 5000;

  std::string out = "problem.qp";
};

int run_generate_qp(const GlobalOpts& g, const GenerateArgs& a) {
  gen::SyntheticSpec spec{a.m, a.n, a.alpha, g.seed, a.constrained};
  const QuadraticProblem p = gen_synthetic_qp(spec);
  const fs::path path = out_path(g, a.out);
  io::save_problem(p, path);
  const auto& lc = p.lipschitz();
  info(g) << "wrote " << path.string() << " (n=" << p.n() << ", L_max=" << lc.l_max
          << ", L_res=" << lc.l_res << ", ratio=" << lc.ratio() << ")\n";
  emit_manifest(g, path,
                {"generate qp",
                 "",
                 {{"m", std::to_string(a.m)},
                  {"n", std::to_string(a.n)},
                  {"alpha", io::format_double(a.alpha)},
                  {"constrained", a.constrained ? "true" : "false"}},
                 {},
                 g.seed});
  return 0;
}

int run_generate_vc(const GlobalOpts& g, const GenerateArgs& a) {
  gen::GraphSpec graph;
  std::string source;
  if (!a.edges_file.empty()) {
    graph = io::load_edge_list(a.edges_file, a.beta);
    source = a.edges_file;
  } else if (a.random_vertices > 0 && a.random_edges > 0) {
    graph = gen::random_graph(a.random_vertices, a.random_edges, a.beta, g.seed);
    source = "random";
  } else {
    std::cerr << "generate vc: need --edges FILE or --random-vertices/--random-edges\n";
    return 2;
  }
  const QuadraticProblem p = gen_vertex_cover(graph);
  const fs::path path = out_path(g, a.out);
  io::save_problem(p, path);
  info(g) << "wrote " << path.string() << " (|V|=" << graph.vertices
          << ", |E|=" << graph.edges.size() << ", n=" << p.n() << ")\n";
  emit_manifest(g, path,
                {"generate vc",
                 source,
                 {{"beta", io::format_double(a.beta)},
                  {"vertices", std::to_string(graph.vertices)},
                  {"edges", std::to_string(graph.edges.size())}},
                 {},
                 g.seed});
  return 0;
}

int run_generate_svm(const GlobalOpts& g, const GenerateArgs& a) {
  gen::SvmSpec spec = io::load_libsvm(a.svm_file);
  spec.box_upper = a.svm_c;
  spec.dense_cap = a.svm_cap;
  const QuadraticProblem p = gen_svm_dual(spec);
  const fs::path path = out_path(g, a.out);
  io::save_problem(p, path);
  info(g) << "wrote " << path.string() << " (N=" << p.n() << ", C=" << a.svm_c << ")\n";
  emit_manifest(g, path,
                {"generate svm",
                 a.svm_file,
                 {{"C", io::format_double(a.svm_c)}, {"samples", std::to_string(p.n())}},
                 {},
                 g.seed});
  return 0;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string problem;
  std::string engine = "async";
  int threads = 1;
  std::optional<double> gamma;
  std::optional<long> tau;
  std::optional<double> rho;
  long shuffle_period = 1;
  double tol = 1e-5;
  long max_epochs = 1000;
  long check_interval = 1;
  std::optional<long> steps;
  std::string schedule = "fixed";
  std::string x0 = "zero";
  std::string trace = "solve_trace.csv";
  bool compute_optimum = false;
};

theory::StepPlan select_plan(const GlobalOpts& g, const QuadraticProblem& p,
                             const SolveArgs& a, long tau) {
  const auto& lc = p.lipschitz();
  const auto n = static_cast<std::int64_t>(p.n());
  const bool box = p.region().is_box();
  const theory::Regime regime =
      box ? theory::Regime::Constrained : theory::Regime::Unconstrained;
  if (a.gamma) {
    info(g) << "warning: steplength forced to gamma=" << *a.gamma
            << "; admissibility not checked\n";
    return theory::manual_plan(regime, n, lc.l_max, lc.l_res, tau, *a.gamma);
  }
  if (!box) {
    if (a.rho) return theory::plan_unconstrained_general(n, lc.l_max, lc.l_res, tau, *a.rho);
    return theory::plan_unconstrained_corollary(n, lc.l_max, lc.l_res, tau);
  }
  if (tau >= 1) return theory::plan_constrained_corollary(n, lc.l_max, lc.l_res, tau);
  // Zero delay needs no corollary gate; gamma = 1/2 satisfies the steplength
  // bounds outright in this case.
  return theory::manual_plan(regime, n, lc.l_max, lc.l_res, 0, 0.5);
}

int run_solve(const GlobalOpts& g, const SolveArgs& a) {
  const QuadraticProblem p = io::load_problem(a.problem);
  const auto n = static_cast<std::int64_t>(p.n());

  std::optional<OptimumEstimate> opt;
  if (a.compute_optimum) opt = estimate_optimum(p);

  const fs::path trace_path = out_path(g, a.trace);
  io::ManifestInfo manifest{"solve", a.problem, {}, {}, g.seed};
  manifest.params = {{"engine", a.engine},
                     {"threads", std::to_string(a.threads)},
                     {"tol", io::format_double(a.tol)},
                     {"max_epochs", std::to_string(a.max_epochs)}};

  if (a.engine == "simulator" || a.engine == "serial") {
    const long tau = a.tau.value_or(0);
    const theory::StepPlan plan = select_plan(g, p, a, tau);
    const std::int64_t steps = a.steps.value_or(a.max_epochs * n);
    sim::RunOptions opts;
    if (opt) opts.reference = &opt->x;

    sim::DelaySchedule schedule = sim::DelaySchedule::zero();
    if (a.engine == "simulator") {
      if (a.schedule == "zero") schedule = sim::DelaySchedule::zero();
      else if (a.schedule == "fixed") schedule = sim::DelaySchedule::fixed(tau);
      else if (a.schedule == "uniform")
        schedule = sim::DelaySchedule::random_uniform(tau, g.seed);
      else if (a.schedule == "adversarial") schedule = sim::DelaySchedule::adversarial(tau);
      else {
        std::cerr << "solve: unknown schedule '" << a.schedule << "'\n";
        return 2;
      }
    }

    const sim::RunResult r =
        a.engine == "simulator"
            ? sim::run(p, plan, schedule, Vec(p.n(), 0.0), steps, g.seed, opts)
            : sim::serial_reference(p, plan.gamma, Vec(p.n(), 0.0), steps, g.seed, opts);

    std::optional<theory::RateEnvelope> linear, sublinear;
    if (opt) {
      const double gap0 = objective(p, Vec(p.n(), 0.0)) - opt->value;
      double r0 = 0.0;
      for (std::size_t i = 0; i < p.n(); ++i) r0 += opt->x[i] * opt->x[i];
      r0 = std::sqrt(r0);
      const ModulusEstimate mod = estimate_modulus(p);
      if (mod.known && mod.value > 0.0 && gap0 > 0.0)
        linear = theory::linear_envelope(plan, mod.value, gap0, r0);
      if (gap0 > 0.0 && r0 > 0.0) sublinear = theory::sublinear_envelope(plan, gap0, r0);
    }
    io::write_trace_csv(trace_path, r.trace,
                        opt ? std::optional<double>(opt->value) : std::nullopt,
                        linear ? &*linear : nullptr, sublinear ? &*sublinear : nullptr);
    const double final_res = r.trace.points.back().residual;
    info(g) << "engine=" << a.engine << " gamma=" << plan.gamma << " tau=" << plan.tau
            << " steps=" << steps << " final_residual=" << final_res << "\n";
    manifest.params.push_back({"gamma", io::format_double(plan.gamma)});
    manifest.params.push_back({"tau", std::to_string(plan.tau)});
    emit_manifest(g, trace_path, manifest);
    return 0;
  }

  par::SolverConfig cfg;
  cfg.threads = a.threads;
  cfg.shuffle_period = a.shuffle_period;
  cfg.tolerance = a.tol;
  cfg.max_epochs = a.max_epochs;
  cfg.seed = g.seed;
  cfg.check_interval = a.check_interval;
  if (a.x0 == "ones") {
    cfg.x0 = Vec(p.n(), 1.0);
  } else if (a.x0 != "zero") {
    std::cerr << "solve: unknown x0 '" << a.x0 << "'\n";
    return 2;
  }

  par::SolveResult result;
  if (a.engine == "syngd") {
    result = par::solve_syngd(p, cfg);
  } else if (a.engine == "async" || a.engine == "locked") {
    const long tau = a.tau.value_or(a.threads - 1);
    const theory::StepPlan plan = select_plan(g, p, a, tau);
    cfg.gamma = plan.gamma;
    result = a.engine == "async" ? par::solve_async(p, cfg) : par::solve_locked(p, cfg);
  } else {
    std::cerr << "solve: unknown engine '" << a.engine << "'\n";
    return 2;
  }

  io::write_trace_csv(trace_path, result.trace,
                      opt ? std::optional<double>(opt->value) : std::nullopt);
  const par::Stats& st = result.stats;
  info(g) << "engine=" << a.engine << " threads=" << st.threads << " epochs=" << st.epochs
          << " updates=" << st.updates << " solve_sec=" << st.solve_seconds
          << " check_sec=" << st.check_seconds << " final_residual=" << st.final_residual
          << (st.tolerance_reached ? " (tolerance reached)" : " (tolerance NOT reached)")
          << "\n";
  std::printf("engine,threads,gamma,epochs,updates,solve_sec,check_sec,residual,reached\n");
  std::printf("%s,%d,%s,%ld,%lld,%s,%s,%s,%d\n", a.engine.c_str(), st.threads,
              io::format_double(cfg.gamma).c_str(), st.epochs, st.updates,
              io::format_double(st.solve_seconds).c_str(),
              io::format_double(st.check_seconds).c_str(),
              io::format_double(st.final_residual).c_str(), st.tolerance_reached ? 1 : 0);
  manifest.params.push_back({"gamma", io::format_double(cfg.gamma)});
  emit_manifest(g, trace_path, manifest);
  return 0;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::string problem;
  std::string threads = "1,2,4,8";
  int reps = 3;
  double tol = 1e-5;
  long max_epochs = 1000;
  std::optional<double> gamma;
  std::optional<long> tau;
  long shuffle_period = 1;
  long check_interval = 1;
  std::string baseline = "async";
  std::string out = "bench.csv";
};

int run_bench(const GlobalOpts& g, const BenchArgs& a) {
  const QuadraticProblem p = io::load_problem(a.problem);

  std::vector<int> thread_list;
  {
    std::stringstream ss(a.threads);
    std::string tok;
    while (std::getline(ss, tok, ',')) thread_list.push_back(std::stoi(tok));
  }
  if (thread_list.empty()) {
    std::cerr << "bench: empty thread list\n";
    return 2;
  }

  par::SolverConfig cfg;
  cfg.tolerance = a.tol;
  cfg.max_epochs = a.max_epochs;
  cfg.seed = g.seed;
  cfg.shuffle_period = a.shuffle_period;
  cfg.check_interval = a.check_interval;
  cfg.record_objective = false;
  if (a.gamma) {
    cfg.gamma = *a.gamma;
  } else {
    // Plan from the largest thread count so one gamma serves every row.
    SolveArgs plan_args;
    const int max_threads = *std::max_element(thread_list.begin(), thread_list.end());
    const long tau = a.tau.value_or(max_threads - 1);
    cfg.gamma = select_plan(g, p, plan_args, tau).gamma;
  }

  par::EngineFn engine = par::solve_async;
  if (a.baseline == "locked") {
    engine = par::solve_locked;
  } else if (a.baseline == "syngd") {
    engine = par::solve_syngd;
  } else if (a.baseline != "async") {
    std::cerr << "bench: unknown baseline '" << a.baseline << "'\n";
    return 2;
  }

  const auto rows = par::measure_speedup(p, cfg, thread_list, a.reps, engine);

  const fs::path path = out_path(g, a.out);
  {
    std::ofstream out(path, std::ios::binary);
    out << "threads,median_sec,speedup,epochs\n";
    for (const auto& row : rows) {
      out << row.threads << ',' << io::format_double(row.median_sec) << ',';
      if (row.reached) out << io::format_double(row.speedup);
      out << ',' << row.epochs << '\n';
    }
  }
  info(g) << "threads  median_sec  speedup  epochs\n";
  for (const auto& row : rows) {
    info(g) << row.threads << "  " << row.median_sec << "  "
            << (row.reached ? io::format_double(row.speedup) : std::string("(not reached)"))
            << "  " << row.epochs << "\n";
  }
  emit_manifest(g, path,
                {"bench",
                 a.problem,
                 {{"baseline", a.baseline},
                  {"threads", a.threads},
                  {"reps", std::to_string(a.reps)},
                  {"gamma", io::format_double(cfg.gamma)},
                  {"tol", io::format_double(a.tol)}},
                 {},
                 g.seed});
  return 0;
}

// ------------------------------------------------------------------ theory

struct TheoryArgs {
  std::string regime = "unc";
  long n = 10000;
  double lmax = 1.0, lres = 1.0;
  long tau = 0;
  std::optional<double> rho;
  std::optional<double> gamma;
  // envelope
  std::string kind = "linear";
  double l = 1.0, gap = 1.0, radius = 1.0;
  long steps = 1000, stride = 1;
  std::string out;
  // confidence
  bool strong = false;
  double eps = 0.1, eta = 0.1;
};

theory::StepPlan theory_plan(const TheoryArgs& a) {
  const bool box = a.regime == "box";
  if (a.gamma) {
    return theory::manual_plan(
        box ? theory::Regime::Constrained : theory::Regime::Unconstrained, a.n, a.lmax,
        a.lres, a.tau, *a.gamma);
  }
  if (box) return theory::plan_constrained_corollary(a.n, a.lmax, a.lres, a.tau);
  if (a.rho) return theory::plan_unconstrained_general(a.n, a.lmax, a.lres, a.tau, *a.rho);
  return theory::plan_unconstrained_corollary(a.n, a.lmax, a.lres, a.tau);
}

int run_theory_plan(const TheoryArgs& a) {
  const theory::StepPlan plan = theory_plan(a);
  std::cout << "regime=" << (plan.regime == theory::Regime::Constrained ? "box" : "unc")
            << "\nn=" << plan.n << "\nl_max=" << io::format_double(plan.l_max)
            << "\nl_res=" << io::format_double(plan.l_res)
            << "\nratio=" << io::format_double(plan.ratio()) << "\ntau=" << plan.tau
            << "\nrho=" << io::format_double(plan.rho)
            << "\npsi=" << io::format_double(plan.psi)
            << "\ngamma=" << io::format_double(plan.gamma)
            << "\nactive_bound=" << plan.active_bound << "\n";
  const auto max_tau = plan.regime == theory::Regime::Constrained
                           ? theory::max_admissible_tau_constrained(a.n, a.lmax, a.lres)
                           : theory::max_admissible_tau_unconstrained(a.n, a.lmax, a.lres);
  std::cout << "max_admissible_tau=" << max_tau << "\n";
  return 0;
}

int run_theory_envelope(const GlobalOpts& g, const TheoryArgs& a) {
  const theory::StepPlan plan = theory_plan(a);
  theory::RateEnvelope env;
  if (a.kind == "linear") {
    env = theory::linear_envelope(plan, a.l, a.gap, a.radius);
  } else if (a.kind == "sublinear") {
    env = theory::sublinear_envelope(plan, a.gap, a.radius);
  } else {
    std::cerr << "theory envelope: unknown kind '" << a.kind << "'\n";
    return 2;
  }
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(out_path(g, a.out), std::ios::binary);
    os = &file;
  }
  *os << "j,bound\n";
  for (long j = 0; j <= a.steps; j += a.stride)
    *os << j << ',' << io::format_double(theory::evaluate_envelope(env, j)) << '\n';
  if (!a.out.empty())
    emit_manifest(g, out_path(g, a.out),
                  {"theory envelope",
                   "",
                   {{"kind", a.kind}, {"regime", a.regime}, {"n", std::to_string(a.n)}},
                   {},
                   g.seed});
  return 0;
}

int run_theory_confidence(const TheoryArgs& a) {
  const auto regime =
      a.regime == "box" ? theory::Regime::Constrained : theory::Regime::Unconstrained;
  const std::int64_t j = theory::iterations_for_confidence(
      regime, a.strong, a.n, a.lmax, a.l, a.gap, a.radius, a.eps, a.eta);
  std::cout << "j=" << j << "\n";
  return 0;
}

// ------------------------------------------------------------------ verify

int print_checks(const std::vector<checks::CheckResult>& results) {
  bool all_pass = true;
  for (const auto& r : results) {
    const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    std::printf("%s %s (%s) [%.2fs]\n", tag, r.name.c_str(), r.detail.c_str(), r.seconds);
    all_pass = all_pass && (r.pass || r.skipped);
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asynchronous stochastic coordinate descent solver and verification harness"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "global RNG seed");
  app.add_option("--out-dir", g.out_dir, "directory for output artifacts");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  GenerateArgs ga;
  auto* cmd_gen = app.add_subcommand("generate", "generate a problem instance");
  cmd_gen->require_subcommand(1);
  auto* gen_qp = cmd_gen->add_subcommand("qp", "synthetic regularized least squares");
  gen_qp->add_option("--m", ga.m, "rows of A");
  gen_qp->add_option("--n", ga.n, "columns of A");
  gen_qp->add_option("--alpha", ga.alpha, "ridge term");
  gen_qp->add_flag("--constrained", ga.constrained, "box variant on x >= 0");
  gen_qp->add_option("--out", ga.out, "output problem file");
  auto* gen_vc = cmd_gen->add_subcommand("vc", "vertex-cover penalty problem");
  gen_vc->add_option("--edges", ga.edges_file, "edge list file");
  gen_vc->add_option("--random-vertices", ga.random_vertices, "random graph |V|");
  gen_vc->add_option("--random-edges", ga.random_edges, "random graph |E|");
  gen_vc->add_option("--beta", ga.beta, "penalty parameter");
  gen_vc->add_option("--out", ga.out, "output problem file");
  auto* gen_svm = cmd_gen->add_subcommand("svm", "kernel SVM dual from LIBSVM data");
  gen_svm->add_option("--data", ga.svm_file, "LIBSVM input file")->required();
  gen_svm->add_option("--C", ga.svm_c, "dual box bound");
  gen_svm->add_option("--cap", ga.svm_cap, "max sample count");
  gen_svm->add_option("--out", ga.out, "output problem file");

  SolveArgs sa;
  auto* cmd_solve = app.add_subcommand("solve", "solve a problem instance");
  cmd_solve->add_option("--problem", sa.problem, "problem file")->required();
  cmd_solve->add_option("--engine", sa.engine, "async|locked|syngd|serial|simulator");
  cmd_solve->add_option("--threads", sa.threads, "worker count");
  cmd_solve->add_option("--gamma", sa.gamma, "force the steplength multiplier");
  cmd_solve->add_option("--tau", sa.tau, "delay bound (default threads-1)");
  cmd_solve->add_option("--rho", sa.rho, "ratio parameter for general plans");
  cmd_solve->add_option("--shuffle-period", sa.shuffle_period, "epochs between reshuffles");
  cmd_solve->add_option("--tol", sa.tol, "target residual");
  cmd_solve->add_option("--max-epochs", sa.max_epochs, "epoch cap");
  cmd_solve->add_option("--check-interval", sa.check_interval, "epochs between checks");
  cmd_solve->add_option("--steps", sa.steps, "simulator update count");
  cmd_solve->add_option("--schedule", sa.schedule, "zero|fixed|uniform|adversarial");
  cmd_solve->add_option("--x0", sa.x0, "zero|ones");
  cmd_solve->add_option("--trace", sa.trace, "trace CSV name");
  cmd_solve->add_flag("--compute-optimum", sa.compute_optimum,
                      "estimate f* for gap/envelope columns");

  BenchArgs ba;
  auto* cmd_bench = app.add_subcommand("bench", "thread-scaling benchmark");
  cmd_bench->add_option("--problem", ba.problem, "problem file")->required();
  cmd_bench->add_option("--threads", ba.threads, "comma-separated thread counts");
  cmd_bench->add_option("--reps", ba.reps, "repetitions per thread count");
  cmd_bench->add_option("--tol", ba.tol, "target residual");
  cmd_bench->add_option("--max-epochs", ba.max_epochs, "epoch cap");
  cmd_bench->add_option("--gamma", ba.gamma, "force the steplength multiplier");
  cmd_bench->add_option("--tau", ba.tau, "delay bound for plan selection");
  cmd_bench->add_option("--shuffle-period", ba.shuffle_period, "epochs between reshuffles");
  cmd_bench->add_option("--check-interval", ba.check_interval, "epochs between checks");
  cmd_bench->add_option("--baseline", ba.baseline, "async|locked|syngd");
  cmd_bench->add_option("--out", ba.out, "output CSV name");

  TheoryArgs ta;
  auto* cmd_theory = app.add_subcommand("theory", "steplength plans and rate envelopes");
  cmd_theory->require_subcommand(1);
  auto* th_plan = cmd_theory->add_subcommand("plan", "compute a steplength plan");
  auto* th_env = cmd_theory->add_subcommand("envelope", "tabulate a rate envelope");
  auto* th_conf = cmd_theory->add_subcommand("confidence", "high-probability iteration count");
  for (auto* c : {th_plan, th_env, th_conf}) {
    c->add_option("--regime", ta.regime, "unc|box");
    c->add_option("--n", ta.n, "dimension");
    c->add_option("--lmax", ta.lmax, "coordinate Lipschitz constant");
    c->add_option("--lres", ta.lres, "restricted Lipschitz constant");
    c->add_option("--tau", ta.tau, "delay bound");
    c->add_option("--rho", ta.rho, "ratio parameter (general plan)");
    c->add_option("--gamma", ta.gamma, "force the steplength multiplier");
  }
  th_env->add_option("--kind", ta.kind, "linear|sublinear");
  th_env->add_option("--l", ta.l, "strong convexity modulus");
  th_env->add_option("--gap", ta.gap, "initial objective gap");
  th_env->add_option("--radius", ta.radius, "R (unconstrained) or R_0 (constrained)");
  th_env->add_option("--steps", ta.steps, "largest j");
  th_env->add_option("--stride", ta.stride, "row stride");
  th_env->add_option("--out", ta.out, "CSV output name (stdout if omitted)");
  th_conf->add_option("--l", ta.l, "strong convexity modulus");
  th_conf->add_option("--gap", ta.gap, "initial objective gap");
  th_conf->add_option("--radius", ta.radius, "R or R_0");
  th_conf->add_flag("--strong", ta.strong, "essentially strongly convex case");
  th_conf->add_option("--eps", ta.eps, "target accuracy");
  th_conf->add_option("--eta", ta.eta, "failure probability");

  int verify_seeds = 100;
  long verify_samples = 10000;
  std::string verify_family = "qp";
  int verify_criterion = 0;
  auto* cmd_verify = app.add_subcommand("verify", "run verification suites");
  cmd_verify->require_subcommand(1);
  auto* v_grad = cmd_verify->add_subcommand("gradcheck", "finite-difference gradient oracle");
  auto* v_plans = cmd_verify->add_subcommand("plans", "steplength-plan property fuzz");
  v_plans->add_option("--samples", verify_samples, "fuzz sample count");
  auto* v_env = cmd_verify->add_subcommand("envelopes", "Monte-Carlo envelope checks");
  v_env->add_option("--family", verify_family, "qp|qpc|qp0");
  v_env->add_option("--seeds", verify_seeds, "Monte-Carlo seed count");
  auto* v_all = cmd_verify->add_subcommand("all", "every acceptance criterion");
  auto* v_one = cmd_verify->add_subcommand("criterion", "one acceptance criterion by number");
  v_one->add_option("--number", verify_criterion, "criterion number (1-14)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (gen_qp->parsed()) return run_generate_qp(g, ga);
    if (gen_vc->parsed()) return run_generate_vc(g, ga);
    if (gen_svm->parsed()) return run_generate_svm(g, ga);
    if (cmd_solve->parsed()) return run_solve(g, sa);
    if (cmd_bench->parsed()) return run_bench(g, ba);
    if (th_plan->parsed()) return run_theory_plan(ta);
    if (th_env->parsed()) return run_theory_envelope(g, ta);
    if (th_conf->parsed()) return run_theory_confidence(ta);
    if (v_grad->parsed()) return print_checks({checks::gradient_oracle()});
    if (v_plans->parsed())
      return print_checks({checks::corollary2_steplength_fuzz(verify_samples),
                           checks::corollary1_plan_fuzz(verify_samples)});
    if (v_env->parsed()) {
      if (verify_family == "qp")
        return print_checks({checks::linear_envelope_unconstrained(verify_seeds)});
      if (verify_family == "qpc")
        return print_checks({checks::linear_envelope_constrained(verify_seeds)});
      if (verify_family == "qp0")
        return print_checks({checks::sublinear_envelope_weak(verify_seeds)});
      std::cerr << "verify envelopes: unknown family '" << verify_family << "'\n";
      return 2;
    }
    if (v_all->parsed()) return print_checks(checks::run_all());
    if (v_one->parsed()) return print_checks({checks::run_one(verify_criterion)});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
