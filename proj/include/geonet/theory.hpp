#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geonet/cascade.hpp"
#include "geonet/failure.hpp"

namespace geonet::theory {

/// Critical density of the unit-radius planar Boolean model. The default is the
/// midpoint of the simulated bracket 1.43 < lambda_c < 1.44.
struct CriticalConstants {
  double lambda_c = 1.435;

  double mu_c() const noexcept;
};

struct SeriesControl {
  double tail_tolerance = 1e-12;
  std::size_t max_terms = 100000;
};

/// Raw left-hand side, the constant it is compared against, and the verdict.
struct ConditionResult {
  std::string condition;
  double lhs = 0.0;
  double threshold = 0.0;
  bool holds = false;
  bool subcritical_warning = false;  // lambda <= lambda_c where the statement assumes otherwise
};

/// Area of the region around a half-unit square holding every possible neighbor.
inline constexpr double kNeighborhoodArea = 2.8284271247461903 + 3.14159265358979323846;

/// Percolation threshold of the renormalized lattice used by the conditions.
inline constexpr double kLatticeBound = 1.0 / 27.0;

/// q_c = 1 - lambda_c / lambda; nullopt when lambda < lambda_c (subcritical).
std::optional<double> critical_q(double lambda, const CriticalConstants& constants = {});

/// Poisson(mean) probability mass at k, evaluated in log space.
double poisson_pmf(double mean, std::size_t k) noexcept;

/// e^{-l/2} + sum_{k>=1} P_{l/2}(k) q(k-1)^k, truncated by the Poisson tail.
double nondecreasing_lhs(double lambda, const std::function<double(std::size_t)>& q,
                         const SeriesControl& ctrl = {});

/// sum_{k>=1} P_{l/2}(k) sum_{m>=0} P_{l|T|}(m) (1 - q(m+k-1)^k).
double nonincreasing_lhs(double lambda, const std::function<double(std::size_t)>& q,
                         const SeriesControl& ctrl = {});

/// Necessary condition for percolation with a non-decreasing rule; holds when
/// the LHS exceeds 1 - 1/27 (no infinite operational component).
ConditionResult thm1_necessary_nondecreasing(double lambda, const FailureRule& rule,
                                             const SeriesControl& ctrl = {},
                                             const CriticalConstants& constants = {});

/// Same for a non-increasing rule; holds when the LHS is below 1/27.
ConditionResult thm1_necessary_nonincreasing(double lambda, const FailureRule& rule,
                                             const SeriesControl& ctrl = {},
                                             const CriticalConstants& constants = {});

/// 2 (d/2 + 2)(3d/2 + 2) lambda. Requires d > 4.
double k0_diagnostic(double lambda, double d);

/// Largest phi' >= -1 with sum_{k=0}^{phi'+1} (l/2)^k/k! < e^{l/2}/27 + 1.
/// nullopt when every phi' qualifies (only for lambda <= 2 ln(27/26)).
std::optional<long> critical_phi(double lambda);

/// No-cascade condition: the non-increasing series with q(j) = sigma_j.
ConditionResult thm2_no_cascade_condition(double lambda, const ThresholdDistribution& dist,
                                          const SeriesControl& ctrl = {},
                                          const CriticalConstants& constants = {});

/// F(1/k0) >= mu1 / mu. Requires mu > mu1 > mu_c and k0 >= 1.
ConditionResult thm2_cascade_sufficient_check(double mu, double mu1,
                                              const ThresholdDistribution& dist, std::size_t k0,
                                              const CriticalConstants& constants = {});

/// (4/27)(m-1) 3^{2m} = 4 (m-1) 3^{2m-3}, exact. Requires 2 <= m <= 19.
std::uint64_t circuit_bound(int m);

/// Number of self-avoiding square-lattice polygons of length 2m that surround a
/// point at the center of a lattice square. Requires 2 <= m <= 6.
std::uint64_t enumerate_circuits(int m);

/// Polygon counts for every length 0..max_length (index = length), odd
/// lengths included. Requires max_length <= 12.
std::vector<std::uint64_t> circuit_counts_by_length(int max_length);

}  // namespace geonet::theory
