#include "asyscd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asyscd::theory {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

void validate_constants(std::int64_t n, double l_max, double l_res) {
  if (n < 1) throw std::invalid_argument("plan: n must be >= 1");
  if (!(l_max > 0.0)) throw std::invalid_argument("plan: L_max must be positive");
  if (!(l_res >= l_max)) throw std::invalid_argument("plan: requires L_res >= L_max");
}

}  // namespace

std::int64_t max_admissible_tau_unconstrained(std::int64_t n, double l_max, double l_res) {
  validate_constants(n, l_max, l_res);
  const double bound = std::sqrt(static_cast<double>(n)) * l_max / (2.0 * kE * l_res);
  std::int64_t tau = static_cast<std::int64_t>(std::floor(bound - 1.0));
  while (tau >= 0 && static_cast<double>(tau + 1) > bound) --tau;
  while (static_cast<double>(tau + 2) <= bound) ++tau;
  return tau;  // -1 when even tau = 0 fails
}

std::int64_t max_admissible_tau_constrained(std::int64_t n, double l_max, double l_res) {
  validate_constants(n, l_max, l_res);
  const double bound = std::sqrt(static_cast<double>(n)) * l_max / (4.0 * kE * l_res);
  std::int64_t tau =
      static_cast<std::int64_t>(std::floor((std::sqrt(1.0 + 4.0 * bound) - 1.0) / 2.0));
  while (tau >= 1 && static_cast<double>(tau) * static_cast<double>(tau + 1) > bound) --tau;
  while (static_cast<double>(tau + 1) * static_cast<double>(tau + 2) <= bound) ++tau;
  return std::max<std::int64_t>(tau, 0);  // 0 when even tau = 1 fails
}

double psi_unconstrained(std::int64_t n, double l_max, double l_res, std::int64_t tau,
                         double rho) {
  const double root_n = std::sqrt(static_cast<double>(n));
  return 1.0 + 2.0 * static_cast<double>(tau) * std::pow(rho, static_cast<double>(tau)) *
                   l_res / (root_n * l_max);
}

double psi_constrained(std::int64_t n, double l_max, double l_res, std::int64_t tau,
                       double rho) {
  const double root_n = std::sqrt(static_cast<double>(n));
  const double t = static_cast<double>(tau);
  return 1.0 + (l_res * t * std::pow(rho, t) / (root_n * l_max)) *
                   (2.0 + l_max / (root_n * l_res) + 2.0 * t / static_cast<double>(n));
}

GammaBounds gamma_bounds_unconstrained(std::int64_t n, double l_max, double l_res,
                                       std::int64_t tau, double rho) {
  const double root_n = std::sqrt(static_cast<double>(n));
  const double t = static_cast<double>(tau);
  GammaBounds b;
  b.b1 = 1.0 / psi_unconstrained(n, l_max, l_res, tau, rho);
  b.b2 = (rho - 1.0) * root_n * l_max / (2.0 * std::pow(rho, t + 1.0) * l_res);
  b.b3 = (rho - 1.0) * root_n * l_max /
         (l_res * std::pow(rho, t) * (2.0 + l_res / (root_n * l_max)));
  return b;
}

GammaBounds gamma_bounds_constrained(std::int64_t n, double l_max, double l_res,
                                     std::int64_t tau, double rho) {
  const double root_n = std::sqrt(static_cast<double>(n));
  const double t = static_cast<double>(tau);
  GammaBounds b;
  b.b1 = 1.0 / psi_constrained(n, l_max, l_res, tau, rho);
  if (tau == 0) {
    b.b2 = std::numeric_limits<double>::infinity();
  } else {
    b.b2 = (1.0 - 1.0 / rho - 2.0 / root_n) * root_n * l_max /
           (4.0 * l_res * t * std::pow(rho, t));
  }
  b.b3 = b.b2;
  return b;
}

StepPlan plan_unconstrained_corollary(std::int64_t n, double l_max, double l_res,
                                      std::int64_t tau) {
  validate_constants(n, l_max, l_res);
  if (tau < 0) throw std::invalid_argument("plan: tau must be >= 0");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double bound = root_n * l_max / (2.0 * kE * l_res);
  if (static_cast<double>(tau + 1) > bound) {
    throw AdmissibilityError(
        "tau=" + std::to_string(tau) + " exceeds the unconstrained delay bound (max " +
            std::to_string(max_admissible_tau_unconstrained(n, l_max, l_res)) + ")",
        max_admissible_tau_unconstrained(n, l_max, l_res));
  }
  StepPlan plan;
  plan.regime = Regime::Unconstrained;
  plan.source = PlanSource::CorollaryOne;
  plan.n = n;
  plan.l_max = l_max;
  plan.l_res = l_res;
  plan.tau = tau;
  plan.rho = 1.0 + 2.0 * kE * l_res / (root_n * l_max);
  plan.psi = psi_unconstrained(n, l_max, l_res, tau, plan.rho);
  plan.gamma = 1.0 / plan.psi;
  plan.active_bound = 1;
  if (plan.psi > 2.0 + 1e-12)
    throw std::logic_error("plan: psi exceeded 2 under admissible inputs");
  return plan;
}

StepPlan plan_unconstrained_general(std::int64_t n, double l_max, double l_res,
                                    std::int64_t tau, double rho) {
  validate_constants(n, l_max, l_res);
  if (tau < 0) throw std::invalid_argument("plan: tau must be >= 0");
  if (!(rho > 1.0)) throw std::invalid_argument("plan: rho must exceed 1");
  StepPlan plan;
  plan.regime = Regime::Unconstrained;
  plan.source = PlanSource::TheoremChoice;
  plan.n = n;
  plan.l_max = l_max;
  plan.l_res = l_res;
  plan.tau = tau;
  plan.rho = rho;
  plan.psi = psi_unconstrained(n, l_max, l_res, tau, rho);
  const GammaBounds b = gamma_bounds_unconstrained(n, l_max, l_res, tau, rho);
  plan.gamma = b.b1;
  plan.active_bound = 1;
  if (b.b2 < plan.gamma) {
    plan.gamma = b.b2;
    plan.active_bound = 2;
  }
  if (b.b3 < plan.gamma) {
    plan.gamma = b.b3;
    plan.active_bound = 3;
  }
  return plan;
}

StepPlan plan_constrained_corollary(std::int64_t n, double l_max, double l_res,
                                    std::int64_t tau, bool enforce) {
  validate_constants(n, l_max, l_res);
  if (enforce) {
    if (n < 5)
      throw AdmissibilityError("constrained plan requires n >= 5", 0);
    if (tau < 1)
      throw AdmissibilityError("constrained plan requires tau >= 1", 0);
    const double bound =
        std::sqrt(static_cast<double>(n)) * l_max / (4.0 * kE * l_res);
    if (static_cast<double>(tau) * static_cast<double>(tau + 1) > bound) {
      const std::int64_t max_tau = max_admissible_tau_constrained(n, l_max, l_res);
      throw AdmissibilityError("tau=" + std::to_string(tau) +
                                   " exceeds the constrained delay bound (max " +
                                   std::to_string(max_tau) + ")",
                               max_tau);
    }
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  StepPlan plan;
  plan.regime = Regime::Constrained;
  plan.source = PlanSource::CorollaryTwo;
  plan.n = n;
  plan.l_max = l_max;
  plan.l_res = l_res;
  plan.tau = tau;
  plan.rho = 1.0 + 4.0 * kE * static_cast<double>(tau) * l_res / (root_n * l_max);
  plan.psi = psi_constrained(n, l_max, l_res, tau, plan.rho);
  plan.gamma = 0.5;
  plan.active_bound = 0;
  if (enforce) {
    const GammaBounds b = gamma_bounds_constrained(n, l_max, l_res, tau, plan.rho);
    if (plan.gamma > b.b1 || plan.gamma > b.b2 || plan.psi > 2.0 + 1e-12)
      throw std::logic_error("plan: gamma=1/2 failed its bounds under admissible inputs");
  }
  return plan;
}

StepPlan manual_plan(Regime regime, std::int64_t n, double l_max, double l_res,
                     std::int64_t tau, double gamma) {
  validate_constants(n, l_max, l_res);
  if (!(gamma > 0.0)) throw std::invalid_argument("plan: gamma must be positive");
  const double root_n = std::sqrt(static_cast<double>(n));
  StepPlan plan;
  plan.regime = regime;
  plan.source = PlanSource::Manual;
  plan.n = n;
  plan.l_max = l_max;
  plan.l_res = l_res;
  plan.tau = tau;
  plan.gamma = gamma;
  // Record the corollary rho for the regime so diagnostics have a reference.
  if (regime == Regime::Unconstrained) {
    plan.rho = 1.0 + 2.0 * kE * l_res / (root_n * l_max);
    plan.psi = psi_unconstrained(n, l_max, l_res, tau, plan.rho);
  } else {
    plan.rho = 1.0 + 4.0 * kE * std::max<double>(1.0, static_cast<double>(tau)) * l_res /
                         (root_n * l_max);
    plan.psi = psi_constrained(n, l_max, l_res, tau, plan.rho);
  }
  return plan;
}

RateEnvelope linear_envelope(const StepPlan& plan, double l, double f0_gap, double r0) {
  if (!(l > 0.0))
    throw std::invalid_argument("linear_envelope: requires modulus l > 0");
  if (f0_gap < 0.0) throw std::invalid_argument("linear_envelope: negative initial gap");
  RateEnvelope env;
  env.kind = RateEnvelope::Kind::LinearStrong;
  env.regime = plan.regime;
  env.n = plan.n;
  const double nd = static_cast<double>(plan.n);
  if (plan.regime == Regime::Unconstrained) {
    if (plan.source == PlanSource::CorollaryOne) {
      env.factor = 1.0 - l / (2.0 * nd * plan.l_max);
    } else {
      env.factor =
          1.0 - (2.0 * l * plan.gamma / (nd * plan.l_max)) * (1.0 - 0.5 * plan.psi * plan.gamma);
    }
    env.initial = f0_gap;
  } else {
    env.factor = 1.0 - l / (nd * (l + plan.l_max / plan.gamma));
    env.initial = r0 * r0 + (2.0 * plan.gamma / plan.l_max) * f0_gap;
  }
  if (!(env.factor > 0.0 && env.factor < 1.0))
    throw std::invalid_argument("linear_envelope: contraction factor outside (0,1)");
  return env;
}

RateEnvelope sublinear_envelope(const StepPlan& plan, double f0_gap, double radius) {
  if (!(f0_gap > 0.0))
    throw std::invalid_argument("sublinear_envelope: requires positive initial gap");
  if (!(radius > 0.0)) throw std::invalid_argument("sublinear_envelope: requires radius > 0");
  RateEnvelope env;
  env.kind = RateEnvelope::Kind::SublinearGeneral;
  env.regime = plan.regime;
  env.n = plan.n;
  env.gamma = plan.gamma;
  const double nd = static_cast<double>(plan.n);
  if (plan.regime == Regime::Unconstrained) {
    env.inv_gap0 = 1.0 / f0_gap;
    if (plan.source == PlanSource::CorollaryOne) {
      env.slope = 1.0 / (4.0 * nd * plan.l_max * radius * radius);
    } else {
      env.slope = plan.gamma * (1.0 - 0.5 * plan.psi * plan.gamma) /
                  (nd * plan.l_max * radius * radius);
    }
  } else {
    env.numer = nd * (radius * radius * plan.l_max + 2.0 * plan.gamma * f0_gap);
  }
  return env;
}

double evaluate_envelope(const RateEnvelope& env, std::int64_t j) {
  if (j < 0) throw std::invalid_argument("evaluate_envelope: j must be >= 0");
  if (env.kind == RateEnvelope::Kind::LinearStrong)
    return env.initial * std::pow(env.factor, static_cast<double>(j));
  if (env.regime == Regime::Unconstrained)
    return 1.0 / (env.inv_gap0 + env.slope * static_cast<double>(j));
  return env.numer / (2.0 * env.gamma * static_cast<double>(env.n + j));
}

std::int64_t iterations_for_confidence(Regime regime, bool strongly_convex, std::int64_t n,
                                       double l_max, double l, double f0_gap, double radius,
                                       double eps, double eta) {
  if (!(f0_gap > 0.0))
    throw std::invalid_argument("iterations_for_confidence: requires positive initial gap");
  if (!(eps > 0.0 && eps < f0_gap))
    throw std::invalid_argument("iterations_for_confidence: eps must lie in (0, f0_gap)");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("iterations_for_confidence: eta must lie in (0,1)");
  const double nd = static_cast<double>(n);
  double j = 0.0;
  if (regime == Regime::Unconstrained) {
    if (strongly_convex) {
      if (!(l > 0.0)) throw std::invalid_argument("iterations_for_confidence: l must be > 0");
      j = (2.0 * nd * l_max / l) * std::log(f0_gap / (eps * eta));
    } else {
      j = 4.0 * nd * l_max * radius * radius * (1.0 / (eps * eta) - 1.0 / f0_gap);
    }
  } else {
    const double top = l_max * radius * radius + f0_gap;
    if (strongly_convex) {
      if (!(l > 0.0)) throw std::invalid_argument("iterations_for_confidence: l must be > 0");
      j = (nd * (l + 2.0 * l_max) / l) * std::abs(std::log(top / (eps * eta)));
    } else {
      j = nd * top / (eps * eta) - nd;
    }
  }
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(j)));
}

}  // namespace asyscd::theory
