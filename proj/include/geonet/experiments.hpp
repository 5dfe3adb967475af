#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geonet/cascade.hpp"
#include "geonet/failure.hpp"
#include "geonet/graph.hpp"
#include "geonet/theory.hpp"

namespace geonet {

enum class ExperimentKind { percolation_sweep, failure_sweep, cascade_trial, lambda_c_estimate };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view text);

/// Finite-size stand-in for "an infinite component exists".
struct PercolationProxy {
  enum class Kind { crossing, giant_fraction };
  Kind kind = Kind::crossing;
  double theta = 0.1;  // giant_fraction: largest component / node count >= theta

  static PercolationProxy crossing() { return {}; }
  static PercolationProxy giant_fraction(double theta) { return {Kind::giant_fraction, theta}; }
  std::string to_string() const;
};

enum class SeedingPolicy { random_node, adjacent_to_largest_vulnerable_component };

std::string_view to_string(SeedingPolicy policy) noexcept;
SeedingPolicy parse_seeding_policy(std::string_view text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::percolation_sweep;
  Region region{50.0, 50.0, Boundary::open_box};
  double radius = 1.0;
  std::vector<double> lambdas;
  std::optional<std::size_t> node_count;  // fixed-n uniform placement instead of Poisson(lambda)
  std::vector<double> qs;                 // independent-failure grid (failure-sweep)
  std::vector<std::string> rules;         // rule text forms, plus "margin[:lambda_c]"
  std::vector<std::string> distributions;
  SeedingPolicy seeding = SeedingPolicy::random_node;
  std::size_t trials = 100;
  Seed base_seed = 0;
  PercolationProxy proxy;
  double tolerance = 0.02;  // bisection interval width
  theory::CriticalConstants constants;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// Checks shared by every kind (geometry, trials, proxy, numeric ranges).
  void validate_common() const;
};

struct PointEstimate {
  std::string label;
  double parameter = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
};

/// p-hat with its binomial standard error sqrt(p(1-p)/trials).
PointEstimate make_estimate(std::string label, double parameter, std::size_t successes,
                            std::size_t trials);

struct CascadeTrialRecord {
  bool feasible = true;
  NodeId seed_node = 0;
  std::size_t seed_degree = 0;
  std::size_t nodes = 0;
  double largest_vulnerable_fraction = 0.0;
  std::size_t failed_count = 0;
  double failed_fraction = 0.0;
  std::size_t rounds = 0;
  double largest_failed_fraction = 0.0;
  bool largest_failed_contains_seed = false;
  bool failed_percolates = false;  // proxy applied to the failed set
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<PointEstimate> points;
  std::vector<std::vector<CascadeTrialRecord>> cascade_records;  // cascade-trial only
  std::optional<Interval> interval;                               // estimates only
};

struct BisectionResult {
  Interval interval;
  std::vector<PointEstimate> evaluations;  // in evaluation order
};

Seed trial_seed(const ExperimentConfig& config, std::size_t point, std::size_t trial) noexcept;

/// Graph for one trial: fixed-n uniform when config.node_count is set, else Poisson(lambda).
SpatialGraph make_graph(const ExperimentConfig& config, double lambda, Seed seed);

bool percolates(const SpatialGraph& graph, std::span<const std::uint8_t> alive,
                const PercolationProxy& proxy);

/// Resolves a rule text form against a realized graph. "margin" and
/// "margin:<lambda_c>" build q(k) = max{0, 1 - mu_c/mu - 1/k} from the
/// graph's mean degree; everything else goes to FailureRule::parse.
FailureRule resolve_rule(std::string_view text, const SpatialGraph& graph,
                         const theory::CriticalConstants& constants);

SweepResult run_sweep(const ExperimentConfig& config);

/// Bisection on lambda for crossing probability 1/2, using common random
/// numbers: each trial thins one Poisson(lambda_max) realization, so every
/// trial's crossing indicator is monotone in lambda.
BisectionResult estimate_lambda_c(const ExperimentConfig& config);

/// Bisection on the independent failure probability q at fixed lambda for
/// proxy probability 1/2; per-trial graphs and failure draws are shared
/// across q, making the indicators monotone in q.
BisectionResult estimate_qc(double lambda, const ExperimentConfig& config);

CascadeTrialRecord run_cascade_trial(const SpatialGraph& graph, const ThresholdDistribution& dist,
                                     SeedingPolicy seeding, Seed seed,
                                     const PercolationProxy& proxy);
CascadeTrialRecord run_cascade_trial(const ExperimentConfig& config, double lambda,
                                     const ThresholdDistribution& dist, SeedingPolicy seeding,
                                     Seed seed);

/// Seed node per policy; nullopt when the policy is infeasible.
std::optional<NodeId> choose_seed_node(const SpatialGraph& graph, const NodeClasses& classes,
                                       SeedingPolicy seeding, Seed seed);

}  // namespace geonet
