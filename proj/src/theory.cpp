#include "geonet/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geonet::theory {

double CriticalConstants::mu_c() const noexcept { return lambda_c * std::numbers::pi; }

std::optional<double> critical_q(double lambda, const CriticalConstants& constants) {
  if (!(lambda >= constants.lambda_c)) return std::nullopt;
  return 1.0 - constants.lambda_c / lambda;
}

double poisson_pmf(double mean, std::size_t k) noexcept {
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

namespace {

/// Upper bound on sum_{j>k} P_mean(j), valid once k + 1 > mean.
double poisson_tail_after(double mean, std::size_t k) {
  const double next = poisson_pmf(mean, k + 1);
  const double ratio = mean / static_cast<double>(k + 2);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return next / (1.0 - ratio);
}

/// Poisson weights P_mean(0..K) with sum_{j>K} P_mean(j) < tolerance.
std::vector<double> truncated_poisson(double mean, double tolerance, std::size_t max_terms) {
  std::vector<double> w;
  for (std::size_t k = 0;; ++k) {
    if (k >= max_terms) throw std::runtime_error("Poisson series did not converge within max_terms");
    w.push_back(poisson_pmf(mean, k));
    if (static_cast<double>(k + 1) > mean && poisson_tail_after(mean, k) < tolerance) break;
  }
  return w;
}

void check_series_args(double lambda, const SeriesControl& ctrl) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (!(ctrl.tail_tolerance > 0.0)) throw std::invalid_argument("tail_tolerance must be > 0");
}

}  // namespace

double nondecreasing_lhs(double lambda, const std::function<double(std::size_t)>& q,
                         const SeriesControl& ctrl) {
  check_series_args(lambda, ctrl);
  const std::vector<double> w = truncated_poisson(lambda / 2.0, ctrl.tail_tolerance, ctrl.max_terms);
  double sum = w[0];
  for (std::size_t k = 1; k < w.size(); ++k) {
    sum += w[k] * std::pow(q(k - 1), static_cast<double>(k));
  }
  return sum;
}

double nonincreasing_lhs(double lambda, const std::function<double(std::size_t)>& q,
                         const SeriesControl& ctrl) {
  check_series_args(lambda, ctrl);
  // Each summand is at most its joint Poisson weight, so splitting the
  // tolerance between the two tails bounds the total truncation error.
  const double half = ctrl.tail_tolerance / 2.0;
  const std::vector<double> outer = truncated_poisson(lambda / 2.0, half, ctrl.max_terms);
  const std::vector<double> inner =
      truncated_poisson(lambda * kNeighborhoodArea, half, ctrl.max_terms);
  double sum = 0.0;
  for (std::size_t k = 1; k < outer.size(); ++k) {
    double inner_sum = 0.0;
    for (std::size_t m = 0; m < inner.size(); ++m) {
      inner_sum += inner[m] * (1.0 - std::pow(q(m + k - 1), static_cast<double>(k)));
    }
    sum += outer[k] * inner_sum;
  }
  return sum;
}

ConditionResult thm1_necessary_nondecreasing(double lambda, const FailureRule& rule,
                                             const SeriesControl& ctrl,
                                             const CriticalConstants& constants) {
  if (!rule.is_nondecreasing()) {
    throw std::invalid_argument("rule " + rule.to_string() + " is not non-decreasing in degree");
  }
  ConditionResult r;
  r.condition = "thm1-nondecreasing";
  r.lhs = nondecreasing_lhs(lambda, [&](std::size_t k) { return rule.probability(k); }, ctrl);
  r.threshold = 1.0 - kLatticeBound;
  r.holds = r.lhs > r.threshold;
  r.subcritical_warning = lambda <= constants.lambda_c;
  return r;
}

ConditionResult thm1_necessary_nonincreasing(double lambda, const FailureRule& rule,
                                             const SeriesControl& ctrl,
                                             const CriticalConstants& constants) {
  if (!rule.is_nonincreasing()) {
    throw std::invalid_argument("rule " + rule.to_string() + " is not non-increasing in degree");
  }
  ConditionResult r;
  r.condition = "thm1-nonincreasing";
  r.lhs = nonincreasing_lhs(lambda, [&](std::size_t k) { return rule.probability(k); }, ctrl);
  r.threshold = kLatticeBound;
  r.holds = r.lhs < r.threshold;
  r.subcritical_warning = lambda <= constants.lambda_c;
  return r;
}

double k0_diagnostic(double lambda, double d) {
  if (!(d > 4.0)) throw std::invalid_argument("lattice edge length d must be > 4");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  return 2.0 * (d / 2.0 + 2.0) * (3.0 * d / 2.0 + 2.0) * lambda;
}

std::optional<long> critical_phi(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  // Divide both sides by e^{l/2}: the partial sum becomes a Poisson CDF.
  const double mean = lambda / 2.0;
  const double bound = kLatticeBound + std::exp(-mean);
  if (bound >= 1.0) return std::nullopt;
  double cdf = 0.0;
  long last_below = -1;  // largest index j with CDF(j) < bound
  for (std::size_t j = 0;; ++j) {
    cdf += poisson_pmf(mean, j);
    if (!(cdf < bound)) break;
    last_below = static_cast<long>(j);
  }
  return last_below - 1;
}

ConditionResult thm2_no_cascade_condition(double lambda, const ThresholdDistribution& dist,
                                          const SeriesControl& ctrl,
                                          const CriticalConstants& constants) {
  ConditionResult r;
  r.condition = "thm2-no-cascade";
  r.lhs = nonincreasing_lhs(
      lambda, [&](std::size_t k) { return reliable_probability(dist, k); }, ctrl);
  r.threshold = kLatticeBound;
  r.holds = r.lhs < r.threshold;
  r.subcritical_warning = lambda <= constants.lambda_c;
  return r;
}

ConditionResult thm2_cascade_sufficient_check(double mu, double mu1,
                                              const ThresholdDistribution& dist, std::size_t k0,
                                              const CriticalConstants& constants) {
  if (!(mu1 > constants.mu_c())) {
    throw std::invalid_argument("mu1 must exceed the critical mean degree " +
                                std::to_string(constants.mu_c()));
  }
  if (!(mu > mu1)) throw std::invalid_argument("mu must exceed mu1");
  if (k0 < 1) throw std::invalid_argument("k0 must be >= 1");
  ConditionResult r;
  r.condition = "thm2-cascade";
  r.lhs = vulnerable_probability(dist, k0);
  r.threshold = mu1 / mu;
  r.holds = r.lhs >= r.threshold;
  return r;
}

std::uint64_t circuit_bound(int m) {
  if (m < 2) throw std::invalid_argument("circuit bound requires m >= 2");
  if (m > 19) throw std::invalid_argument("circuit bound overflows 64 bits for m > 19");
  std::uint64_t pow3 = 1;
  for (int i = 0; i < 2 * m - 3; ++i) pow3 *= 3;
  return 4ULL * static_cast<std::uint64_t>(m - 1) * pow3;
}

}  // namespace geonet::theory
