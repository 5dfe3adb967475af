#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "geonet/graph.hpp"

namespace geonet {

/// Piecewise-constant threshold density on (0, 1).
class ThresholdDistribution {
 public:
  struct Piece {
    double lo = 0.0;
    double hi = 1.0;
    double density = 1.0;
  };

  static constexpr double kMassTolerance = 1e-12;

  /// Pieces must tile (0,1) in order with non-negative densities and unit mass.
  explicit ThresholdDistribution(std::vector<Piece> pieces);

  static ThresholdDistribution uniform();

  /// Parses "uniform" or "pieces:lo,hi,density;lo,hi,density;...". Numbers may be
  /// fractions ("5/18"). Decimal round-off in the densities (total mass within
  /// 1e-6 of one) is absorbed by rescaling to unit mass.
  static ThresholdDistribution parse(std::string_view text);

  /// Exact CDF; 0 for x <= 0 (including -inf), 1 for x >= 1.
  double cdf(double x) const noexcept;

  /// Inverse CDF for u in (0,1); the result lies in (0,1).
  double quantile(double u) const noexcept;

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  std::string to_string() const;

 private:
  std::vector<Piece> pieces_;
  std::vector<double> cumulative_;  // mass below pieces_[i].lo, plus total at the end
};

/// rho_k = F(1/k). Throws for k = 0.
double vulnerable_probability(const ThresholdDistribution& dist, std::size_t k);

/// sigma_k = 1 - F((k-1)/k), sigma_0 = 1.
double reliable_probability(const ThresholdDistribution& dist, std::size_t k);

/// One psi per node by inverse-CDF sampling of the threshold stream of `seed`.
std::vector<double> sample_thresholds(const SpatialGraph& graph, const ThresholdDistribution& dist,
                                      Seed seed);

/// Fraction of a degree-k node's neighbors that have failed. Shared by the
/// classifier and the cascade so both use the same arithmetic.
inline double failed_fraction(std::size_t failed, std::size_t degree) noexcept {
  return static_cast<double>(failed) / static_cast<double>(degree);
}

inline bool is_vulnerable(double psi, std::size_t degree) noexcept {
  return degree >= 1 && failed_fraction(1, degree) >= psi;
}

inline bool is_reliable(double psi, std::size_t degree) noexcept {
  return degree == 0 || failed_fraction(degree - 1, degree) < psi;
}

/// Node labels. A node can carry several: degree-1 nodes are both vulnerable
/// and reliable, and isolated-reliable nodes are reliable.
class NodeClasses {
 public:
  enum Bit : std::uint8_t { kVulnerable = 1, kReliable = 2, kIsolatedReliable = 4 };

  NodeClasses() = default;
  explicit NodeClasses(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  std::size_t size() const noexcept { return bits_.size(); }
  bool vulnerable(NodeId v) const noexcept { return bits_[v] & kVulnerable; }
  bool reliable(NodeId v) const noexcept { return bits_[v] & kReliable; }
  bool unreliable(NodeId v) const noexcept { return !reliable(v); }
  bool isolated_reliable(NodeId v) const noexcept { return bits_[v] & kIsolatedReliable; }

  Mask vulnerable_mask() const;
  Mask unreliable_mask() const;
  std::size_t vulnerable_count() const noexcept;
  std::size_t reliable_count() const noexcept;

 private:
  std::vector<std::uint8_t> bits_;
};

NodeClasses classify(const SpatialGraph& graph, const std::vector<double>& thresholds);

struct CascadeState {
  std::vector<double> thresholds;
  Mask failed;
  std::vector<std::vector<NodeId>> rounds;  // rounds[0] = {seed_node}; each round sorted
  NodeId seed_node = 0;

  std::size_t failed_count() const noexcept;
};

/// Synchronous threshold dynamics: the seed fails in round 0; in round t every
/// operational node with degree >= 1 whose failed-neighbor fraction (over its
/// original degree) has reached psi fails. Stops after the first empty round.
CascadeState run_cascade(const SpatialGraph& graph, std::vector<double> thresholds,
                         NodeId seed_node);

ComponentLabeling vulnerable_component_analysis(const SpatialGraph& graph,
                                                const std::vector<double>& thresholds);

/// Largest number of isolated-reliable neighbors of any single node.
std::size_t isolated_reliable_count_check(const SpatialGraph& graph,
                                          const std::vector<double>& thresholds);

struct FailedComponentSummary {
  std::size_t largest_size = 0;
  bool contains_seed = false;
};

FailedComponentSummary largest_failed_component(const SpatialGraph& graph,
                                                const CascadeState& state);

}  // namespace geonet
