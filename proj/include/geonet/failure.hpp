#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geonet/graph.hpp"

namespace geonet {

struct IndependentFailure {
  double q = 0.0;
};

/// q(k) = table[k] for k < table.size(), tail otherwise.
struct DegreeTableFailure {
  std::vector<double> table;
  double tail = 1.0;
};

/// Destroys every node whose degree is strictly greater than phi.
struct ThresholdAttack {
  long phi = 0;
};

/// Degree-dependent failure probability q(k).
class FailureRule {
 public:
  using Kind = std::variant<IndependentFailure, DegreeTableFailure, ThresholdAttack>;

  FailureRule() = default;
  FailureRule(Kind kind);  // NOLINT(google-explicit-constructor): rules are values

  static FailureRule independent(double q) { return FailureRule(IndependentFailure{q}); }
  static FailureRule table(std::vector<double> table, double tail) {
    return FailureRule(DegreeTableFailure{std::move(table), tail});
  }
  static FailureRule attack(long phi) { return FailureRule(ThresholdAttack{phi}); }

  /// Parses "indep:0.3", "attack:4" or "table:0,0,0.1,0.2;tail=1.0".
  static FailureRule parse(std::string_view text);

  const Kind& kind() const noexcept { return kind_; }
  double probability(std::size_t degree) const noexcept;
  bool is_deterministic() const noexcept;
  bool is_nondecreasing() const noexcept;
  bool is_nonincreasing() const noexcept;

  /// Equivalent degree table covering degrees 0..max_degree.
  FailureRule as_table(std::size_t max_degree) const;

  std::string to_string() const;

 private:
  Kind kind_ = IndependentFailure{};
};

/// q(k) = max{0, 1 - mu_c/mu - 1/k} tabulated up to max_degree, q(0) = 0.
FailureRule margin_rule(double mu_c, double mu, std::size_t max_degree);

struct FailureOutcome {
  Mask alive;
  FailureRule rule;
  Seed seed = 0;

  std::size_t alive_count() const noexcept;
};

/// Node i fails iff u_i < q(degree_i), where u_i is the i-th draw of the
/// failure stream of `seed` and degrees are those of the original graph.
/// Deterministic rules consume no randomness.
FailureOutcome apply_failures(const SpatialGraph& graph, const FailureRule& rule, Seed seed);

/// Survivor count per unit area after independent failures with probability q.
double thinning_check(const SpatialGraph& graph, double q, Seed seed);

}  // namespace geonet
