// Exhaustive enumeration of lattice circuits around the center of a square.
//
// Vertices are integer points; the enclosed point sits at (1/2, 1/2). Any
// circuit around it crosses the ray y = 1/2, x > 1/2, so it contains a
// vertical edge (i,0)-(i,1) with i >= 1. We start a self-avoiding walk on each
// such edge, close it back on the start vertex, and deduplicate by edge set.

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geonet/theory.hpp"

namespace geonet::theory {
namespace {

struct Vertex {
  int x;
  int y;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

using Edge = std::pair<std::pair<int, int>, std::pair<int, int>>;

Edge make_edge(Vertex a, Vertex b) {
  auto pa = std::make_pair(a.x, a.y);
  auto pb = std::make_pair(b.x, b.y);
  return pa < pb ? Edge{pa, pb} : Edge{pb, pa};
}

// Ray-crossing parity against (1/2, 1/2): count vertical edges (i,0)-(i,1), i >= 1.
bool surrounds_center(const std::vector<Vertex>& loop) {
  int crossings = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vertex a = loop[i];
    const Vertex b = loop[(i + 1) % loop.size()];
    if (a.x == b.x && a.x >= 1 && std::min(a.y, b.y) == 0 && std::max(a.y, b.y) == 1) ++crossings;
  }
  return crossings % 2 == 1;
}

class CircuitEnumerator {
 public:
  explicit CircuitEnumerator(int length)
      : length_(length), half_(length + 2), side_(2 * half_ + 1),
        visited_(static_cast<std::size_t>(side_ * side_), 0) {}

  std::uint64_t count() {
    if (length_ < 4) return 0;
    for (int i = 1; i <= length_ / 2; ++i) {
      start_ = {i, 0};
      path_ = {start_, {i, 1}};
      mark(start_, 1);
      mark(path_[1], 1);
      extend();
      mark(path_[1], 0);
      mark(start_, 0);
    }
    return circuits_.size();
  }

 private:
  std::size_t index(Vertex v) const {
    return static_cast<std::size_t>((v.y + half_) * side_ + (v.x + half_));
  }
  void mark(Vertex v, std::uint8_t on) { visited_[index(v)] = on; }

  void extend() {
    const Vertex here = path_.back();
    const int steps_left = length_ - static_cast<int>(path_.size()) + 1;
    static constexpr int kDx[4] = {1, 0, -1, 0};
    static constexpr int kDy[4] = {0, 1, 0, -1};
    for (int d = 0; d < 4; ++d) {
      const Vertex next{here.x + kDx[d], here.y + kDy[d]};
      if (next == start_) {
        if (steps_left == 1) record();
        continue;
      }
      if (steps_left <= 1 || visited_[index(next)]) continue;
      const int back = std::abs(next.x - start_.x) + std::abs(next.y - start_.y);
      if (back > steps_left - 1) continue;
      path_.push_back(next);
      mark(next, 1);
      extend();
      mark(next, 0);
      path_.pop_back();
    }
  }

  void record() {
    if (!surrounds_center(path_)) return;
    std::vector<Edge> edges;
    edges.reserve(path_.size());
    for (std::size_t i = 0; i < path_.size(); ++i) {
      edges.push_back(make_edge(path_[i], path_[(i + 1) % path_.size()]));
    }
    std::sort(edges.begin(), edges.end());
    circuits_.insert(std::move(edges));
  }

  int length_;
  int half_;
  int side_;
  std::vector<std::uint8_t> visited_;
  Vertex start_{0, 0};
  std::vector<Vertex> path_;
  std::set<std::vector<Edge>> circuits_;
};

}  // namespace

std::vector<std::uint64_t> circuit_counts_by_length(int max_length) {
  if (max_length < 0 || max_length > 12) {
    throw std::invalid_argument("circuit enumeration supports lengths up to 12");
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_length) + 1, 0);
  for (int len = 0; len <= max_length; ++len) {
    counts[static_cast<std::size_t>(len)] = CircuitEnumerator(len).count();
  }
  return counts;
}

std::uint64_t enumerate_circuits(int m) {
  if (m < 2 || m > 6) throw std::invalid_argument("enumerate_circuits requires 2 <= m <= 6");
  return CircuitEnumerator(2 * m).count();
}

}  // namespace geonet::theory
