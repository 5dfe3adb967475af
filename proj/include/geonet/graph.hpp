#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "geonet/random.hpp"

namespace geonet {

using NodeId = std::uint32_t;

/// Per-node liveness flags (1 = operational).
using Mask = std::vector<std::uint8_t>;

inline Mask all_alive(std::size_t n) { return Mask(n, 1); }

enum class Boundary { open_box, torus };

std::string_view to_string(Boundary b) noexcept;
Boundary parse_boundary(std::string_view text);

struct Region {
  double width = 1.0;
  double height = 1.0;
  Boundary boundary = Boundary::open_box;

  Region() = default;
  Region(double w, double h, Boundary b = Boundary::open_box);

  double area() const noexcept { return width * height; }
  bool contains(double x, double y) const noexcept {
    return x >= 0.0 && x <= width && y >= 0.0 && y <= height;
  }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct PointSet {
  std::vector<Point> coords;
  Region region;
  double intensity = 0.0;

  std::size_t size() const noexcept { return coords.size(); }
};

/// Exactly n i.i.d. uniform points; intensity is n / area.
PointSet generate_uniform(std::size_t n, const Region& region, Seed seed);

/// Homogeneous Poisson process: count ~ Poisson(lambda * area), then uniform placement.
PointSet generate_poisson(double lambda, const Region& region, Seed seed);

/// Squared distance under the region's metric (wrapped on a torus).
double squared_distance(const Region& region, const Point& a, const Point& b) noexcept;

/// Immutable random geometric graph. Nodes u != v are adjacent iff
/// distance(u, v) <= radius. Adjacency is stored as sorted CSR rows.
class SpatialGraph {
 public:
  SpatialGraph() = default;
  SpatialGraph(PointSet points, double radius);

  const PointSet& points() const noexcept { return points_; }
  const Region& region() const noexcept { return points_.region; }
  double radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  const std::vector<std::uint32_t>& degrees() const noexcept { return degrees_; }
  std::size_t max_degree() const noexcept;
  double mean_degree() const noexcept;
  bool adjacent(NodeId u, NodeId v) const noexcept;

 private:
  PointSet points_;
  double radius_ = 1.0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<std::uint32_t> degrees_;
};

/// Builds the graph with a uniform grid of cells of side >= radius, scanning
/// only the 3x3 block of cells around each point.
SpatialGraph build_graph(PointSet points, double radius);

inline constexpr std::uint32_t kNoComponent = std::numeric_limits<std::uint32_t>::max();

struct ComponentLabeling {
  std::vector<std::uint32_t> id;      // per node; kNoComponent for dead nodes
  std::vector<std::size_t> sizes;     // per component id
  std::uint32_t largest_id = kNoComponent;
  std::size_t largest_size = 0;

  std::size_t component_count() const noexcept { return sizes.size(); }
};

/// Connected components of the subgraph induced by alive nodes. Component ids
/// are assigned in order of each component's lowest node index.
ComponentLabeling components(const SpatialGraph& graph, std::span<const std::uint8_t> alive);
ComponentLabeling components(const SpatialGraph& graph);

struct Rect {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
};

enum class Direction { left_right, top_bottom };

/// True iff a connected chain of alive nodes inside `rect` starts strictly
/// within one radius of the entry side and ends strictly within one radius of
/// the opposite side. Throws on torus regions.
bool crosses(const SpatialGraph& graph, std::span<const std::uint8_t> alive, const Rect& rect,
             Direction direction);

/// Convenience: the whole region as the crossing rectangle.
Rect full_rect(const Region& region) noexcept;

}  // namespace geonet
