#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

// Steplength plans and convergence-rate envelopes for asynchronous stochastic
// coordinate descent with delay bound tau. All quantities follow the
// published analysis for the unconstrained and separable-box cases.

namespace asyscd::theory {

enum class Regime { Unconstrained, Constrained };

enum class PlanSource {
  CorollaryOne,   // opinionated unconstrained choice: rho fixed, gamma = 1/psi
  CorollaryTwo,   // opinionated constrained choice: gamma = 1/2
  TheoremChoice,  // user-supplied rho, gamma = min of the admissible bounds
  Manual,         // forced gamma (diagnostics, overrides)
};

struct StepPlan {
  Regime regime = Regime::Unconstrained;
  PlanSource source = PlanSource::Manual;
  std::int64_t n = 0;
  double l_max = 1.0;
  double l_res = 1.0;
  std::int64_t tau = 0;
  double rho = 1.0;
  double psi = 1.0;
  double gamma = 1.0;
  int active_bound = 0;  // which steplength bound produced gamma (1..3)

  double ratio() const { return l_res / l_max; }
};

// Raised when a delay bound tau is too large for (n, L_res/L_max); carries
// the largest tau that would be admissible.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& msg, std::int64_t max_tau_)
      : std::runtime_error(msg), max_tau(max_tau_) {}
  std::int64_t max_tau;
};

// Largest tau with tau+1 <= sqrt(n) L_max / (2 e L_res); -1 if none.
std::int64_t max_admissible_tau_unconstrained(std::int64_t n, double l_max, double l_res);
// Largest tau >= 1 with tau(tau+1) <= sqrt(n) L_max / (4 e L_res); 0 if none.
std::int64_t max_admissible_tau_constrained(std::int64_t n, double l_max, double l_res);

double psi_unconstrained(std::int64_t n, double l_max, double l_res, std::int64_t tau,
                         double rho);
double psi_constrained(std::int64_t n, double l_max, double l_res, std::int64_t tau,
                       double rho);

struct GammaBounds {
  double b1 = 0.0;  // 1/psi
  double b2 = 0.0;
  double b3 = 0.0;
};
GammaBounds gamma_bounds_unconstrained(std::int64_t n, double l_max, double l_res,
                                       std::int64_t tau, double rho);
// Returns {1/psi, staleness bound}; valid for rho > (1 - 2/sqrt(n))^-1.
GammaBounds gamma_bounds_constrained(std::int64_t n, double l_max, double l_res,
                                     std::int64_t tau, double rho);

StepPlan plan_unconstrained_corollary(std::int64_t n, double l_max, double l_res,
                                      std::int64_t tau);
StepPlan plan_unconstrained_general(std::int64_t n, double l_max, double l_res,
                                    std::int64_t tau, double rho);
// enforce=false skips the tau gate but still fills rho/psi with the
// corollary parameters; used for diagnostics at sizes below the gate.
StepPlan plan_constrained_corollary(std::int64_t n, double l_max, double l_res,
                                    std::int64_t tau, bool enforce = true);
StepPlan manual_plan(Regime regime, std::int64_t n, double l_max, double l_res,
                     std::int64_t tau, double gamma);

struct RateEnvelope {
  enum class Kind { LinearStrong, SublinearGeneral };
  Kind kind = Kind::LinearStrong;
  Regime regime = Regime::Unconstrained;
  // Linear: value(j) = initial * factor^j.
  double factor = 0.0;
  double initial = 0.0;
  // Sublinear unconstrained: value(j) = 1 / (inv_gap0 + slope * j).
  double inv_gap0 = 0.0;
  double slope = 0.0;
  // Sublinear constrained: value(j) = numer / (2 gamma (n + j)).
  double numer = 0.0;
  double gamma = 0.0;
  std::int64_t n = 0;
};

// Linear-rate envelope for modulus l > 0. For the constrained regime the
// bounded quantity is ||x_j - x*||^2 + (2 gamma / L_max)(f(x_j) - f*), with
// initial term r0^2 + (2 gamma / L_max) f0_gap.
RateEnvelope linear_envelope(const StepPlan& plan, double l, double f0_gap, double r0);
// 1/K envelope for general convex problems. `radius` is R (unconstrained,
// uniform iterate distance bound) or R_0 (constrained).
RateEnvelope sublinear_envelope(const StepPlan& plan, double f0_gap, double radius);
double evaluate_envelope(const RateEnvelope& env, std::int64_t j);

// Smallest iteration count j such that f(x_j) - f* <= eps holds with
// probability at least 1 - eta under the corollary parameter choices.
std::int64_t iterations_for_confidence(Regime regime, bool strongly_convex, std::int64_t n,
                                       double l_max, double l, double f0_gap, double radius,
                                       double eps, double eta);

}  // namespace asyscd::theory
