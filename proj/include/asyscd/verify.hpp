#pragma once

#include <string>
#include <vector>

// Verification suites shared by the `verify` CLI subcommand and the
// acceptance test binary. Each check is self-contained: it builds its own
// instances, runs the required Monte-Carlo experiments, and reports one
// pass/fail line of detail.

namespace asyscd::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;  // host cannot exercise the claim (e.g. core count)
  std::string detail;
  double seconds = 0.0;
};

CheckResult tau_zero_equivalence();                      // simulator == serial reference
CheckResult gradient_oracle(int instances = 100);        // finite-difference check
CheckResult lipschitz_properties();                      // L_res bounds
CheckResult corollary2_steplength_fuzz(long samples = 10000);
CheckResult corollary1_plan_fuzz(long samples = 10000);
CheckResult linear_envelope_unconstrained(int seeds = 100);
CheckResult linear_envelope_constrained(int seeds = 100);
CheckResult sublinear_envelope_weak(int seeds = 100);
CheckResult expectation_monotonicity(int seeds = 100);
CheckResult high_probability_counts(int runs = 500);
CheckResult multicore_sanity();
CheckResult baseline_correctness();
CheckResult vertex_cover_integrity();
CheckResult ratio_bands(int seeds = 100);

// All fourteen checks in acceptance order.
std::vector<CheckResult> run_all();
// Single check by 1-based acceptance number.
CheckResult run_one(int number);

}  // namespace asyscd::checks
