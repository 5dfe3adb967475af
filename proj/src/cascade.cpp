#include "geonet/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "geonet/parse.hpp"

namespace geonet {

ThresholdDistribution::ThresholdDistribution(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("threshold distribution has no pieces");
  if (pieces_.front().lo != 0.0) throw std::invalid_argument("pieces[0] must start at 0");
  if (pieces_.back().hi != 1.0) throw std::invalid_argument("last piece must end at 1");
  cumulative_.assign(1, 0.0);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    const std::string name = "pieces[" + std::to_string(i) + "]";
    if (!(p.lo < p.hi)) throw std::invalid_argument(name + ": interval is empty");
    if (i > 0 && p.lo != pieces_[i - 1].hi) {
      throw std::invalid_argument(name + ": does not start where the previous piece ends");
    }
    if (!(p.density >= 0.0) || !std::isfinite(p.density)) {
      throw std::invalid_argument(name + ": density must be finite and >= 0");
    }
    cumulative_.push_back(cumulative_.back() + p.density * (p.hi - p.lo));
  }
  if (std::abs(cumulative_.back() - 1.0) > kMassTolerance) {
    throw std::invalid_argument("threshold density must integrate to 1 (got " +
                                std::to_string(cumulative_.back()) + ")");
  }
}

ThresholdDistribution ThresholdDistribution::uniform() {
  return ThresholdDistribution({{0.0, 1.0, 1.0}});
}

ThresholdDistribution ThresholdDistribution::parse(std::string_view text) {
  text = trim(text);
  if (text == "uniform") return uniform();
  if (text.substr(0, 7) != "pieces:") {
    throw std::invalid_argument("distribution: expected 'uniform' or 'pieces:lo,hi,density;...'");
  }
  std::vector<Piece> pieces;
  for (std::string_view triple : split(text.substr(7), ';')) {
    const std::string name = "distribution pieces[" + std::to_string(pieces.size()) + "]";
    const auto parts = split(triple, ',');
    if (parts.size() != 3) throw std::invalid_argument(name + ": expected lo,hi,density");
    pieces.push_back({parse_number(parts[0], name + ".lo"), parse_number(parts[1], name + ".hi"),
                      parse_number(parts[2], name + ".density")});
  }
  double mass = 0.0;
  for (const Piece& p : pieces) mass += p.density * (p.hi - p.lo);
  if (std::abs(mass - 1.0) <= 1e-6 && mass > 0.0) {
    for (Piece& p : pieces) p.density /= mass;
  }
  return ThresholdDistribution(std::move(pieces));
}

double ThresholdDistribution::cdf(double x) const noexcept {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](double v, const Piece& p) { return v < p.hi; });
  const auto i = static_cast<std::size_t>(it - pieces_.begin());
  if (i >= pieces_.size()) return 1.0;
  const double value = cumulative_[i] + pieces_[i].density * (x - pieces_[i].lo);
  return std::clamp(value, 0.0, 1.0);
}

double ThresholdDistribution::quantile(double u) const noexcept {
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.density <= 0.0) continue;
    last_positive = i;
    if (u <= cumulative_[i + 1]) {
      const double x = p.lo + (u - cumulative_[i]) / p.density;
      return std::clamp(x, std::nextafter(p.lo, p.hi), std::nextafter(p.hi, p.lo));
    }
  }
  const Piece& p = pieces_[last_positive];
  return std::nextafter(p.hi, p.lo);
}

std::string ThresholdDistribution::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "pieces:";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    os << (i ? ";" : "") << pieces_[i].lo << ',' << pieces_[i].hi << ',' << pieces_[i].density;
  }
  return os.str();
}

double vulnerable_probability(const ThresholdDistribution& dist, std::size_t k) {
  if (k == 0) throw std::invalid_argument("vulnerable probability is undefined for degree 0");
  return dist.cdf(failed_fraction(1, k));
}

double reliable_probability(const ThresholdDistribution& dist, std::size_t k) {
  if (k == 0) return 1.0;
  return 1.0 - dist.cdf(failed_fraction(k - 1, k));
}

std::vector<double> sample_thresholds(const SpatialGraph& graph, const ThresholdDistribution& dist,
                                      Seed seed) {
  const CounterStream stream(seed, Stream::thresholds);
  std::vector<double> psi(graph.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = dist.quantile(stream.uniform(i));
  return psi;
}

Mask NodeClasses::vulnerable_mask() const {
  Mask m(bits_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = (bits_[i] & kVulnerable) ? 1 : 0;
  return m;
}

Mask NodeClasses::unreliable_mask() const {
  Mask m(bits_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = (bits_[i] & kReliable) ? 0 : 1;
  return m;
}

std::size_t NodeClasses::vulnerable_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b & kVulnerable; }));
}

std::size_t NodeClasses::reliable_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b & kReliable; }));
}

namespace {

void check_thresholds(const SpatialGraph& graph, const std::vector<double>& thresholds) {
  if (thresholds.size() != graph.size()) {
    throw std::invalid_argument("thresholds length " + std::to_string(thresholds.size()) +
                                " does not match node count " + std::to_string(graph.size()));
  }
}

}  // namespace

NodeClasses classify(const SpatialGraph& graph, const std::vector<double>& thresholds) {
  check_thresholds(graph, thresholds);
  const std::size_t n = graph.size();
  std::vector<std::uint8_t> bits(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t k = graph.degree(v);
    if (is_vulnerable(thresholds[v], k)) bits[v] |= NodeClasses::kVulnerable;
    if (is_reliable(thresholds[v], k)) bits[v] |= NodeClasses::kReliable;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!(bits[v] & NodeClasses::kReliable) || graph.degree(v) == 0) continue;
    const auto nbrs = graph.neighbors(v);
    const bool all_unreliable = std::none_of(
        nbrs.begin(), nbrs.end(), [&](NodeId w) { return bits[w] & NodeClasses::kReliable; });
    if (all_unreliable) bits[v] |= NodeClasses::kIsolatedReliable;
  }
  return NodeClasses(std::move(bits));
}

std::size_t CascadeState::failed_count() const noexcept {
  return static_cast<std::size_t>(std::count(failed.begin(), failed.end(), std::uint8_t{1}));
}

CascadeState run_cascade(const SpatialGraph& graph, std::vector<double> thresholds,
                         NodeId seed_node) {
  check_thresholds(graph, thresholds);
  const std::size_t n = graph.size();
  if (seed_node >= n) {
    throw std::invalid_argument("seed node " + std::to_string(seed_node) + " is out of range");
  }
  CascadeState state;
  state.thresholds = std::move(thresholds);
  state.seed_node = seed_node;
  state.failed.assign(n, 0);
  state.failed[seed_node] = 1;
  state.rounds.push_back({seed_node});

  std::vector<std::uint32_t> failed_neighbors(n, 0);
  std::vector<std::uint8_t> queued(n, 0);
  std::vector<NodeId> candidates;
  std::vector<NodeId> next;
  while (true) {
    candidates.clear();
    for (NodeId v : state.rounds.back()) {
      for (NodeId w : graph.neighbors(v)) {
        if (state.failed[w]) continue;
        ++failed_neighbors[w];
        if (!queued[w]) {
          queued[w] = 1;
          candidates.push_back(w);
        }
      }
    }
    next.clear();
    for (NodeId w : candidates) {
      queued[w] = 0;
      if (failed_fraction(failed_neighbors[w], graph.degree(w)) >= state.thresholds[w]) {
        next.push_back(w);
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    for (NodeId w : next) state.failed[w] = 1;
    state.rounds.push_back(next);
  }
  return state;
}

ComponentLabeling vulnerable_component_analysis(const SpatialGraph& graph,
                                                const std::vector<double>& thresholds) {
  const Mask vulnerable = classify(graph, thresholds).vulnerable_mask();
  return components(graph, vulnerable);
}

std::size_t isolated_reliable_count_check(const SpatialGraph& graph,
                                          const std::vector<double>& thresholds) {
  const NodeClasses classes = classify(graph, thresholds);
  std::size_t best = 0;
  for (NodeId v = 0; v < graph.size(); ++v) {
    const auto nbrs = graph.neighbors(v);
    const auto count = static_cast<std::size_t>(std::count_if(
        nbrs.begin(), nbrs.end(), [&](NodeId w) { return classes.isolated_reliable(w); }));
    best = std::max(best, count);
  }
  return best;
}

FailedComponentSummary largest_failed_component(const SpatialGraph& graph,
                                                const CascadeState& state) {
  const ComponentLabeling labels = components(graph, state.failed);
  return {labels.largest_size,
          labels.largest_id != kNoComponent && labels.id[state.seed_node] == labels.largest_id};
}

}  // namespace geonet
