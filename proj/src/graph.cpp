#include "geonet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "geonet/union_find.hpp"

namespace geonet {

std::string_view to_string(Boundary b) noexcept {
  return b == Boundary::torus ? "torus" : "open-box";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "open-box" || text == "open") return Boundary::open_box;
  if (text == "torus") return Boundary::torus;
  throw std::invalid_argument("boundary: expected 'open-box' or 'torus', got '" +
                              std::string(text) + "'");
}

Region::Region(double w, double h, Boundary b) : width(w), height(h), boundary(b) {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("region.width must be > 0");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("region.height must be > 0");
}

namespace {

void place_uniform(PointSet& ps, std::size_t n, Seed seed) {
  const CounterStream stream(seed, Stream::points);
  ps.coords.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ps.coords[i] = {ps.region.width * stream.uniform(2 * i),
                    ps.region.height * stream.uniform(2 * i + 1)};
  }
}

}  // namespace

PointSet generate_uniform(std::size_t n, const Region& region, Seed seed) {
  PointSet ps;
  ps.region = region;
  place_uniform(ps, n, seed);
  ps.intensity = static_cast<double>(n) / region.area();
  return ps;
}

PointSet generate_poisson(double lambda, const Region& region, Seed seed) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be a finite non-negative density");
  }
  PointSet ps;
  ps.region = region;
  ps.intensity = lambda;
  const double mean = lambda * region.area();
  std::size_t n = 0;
  if (mean > 0.0) {
    std::mt19937_64 engine(CounterStream(seed, Stream::count).bits(0));
    std::poisson_distribution<std::uint64_t> count(mean);
    n = static_cast<std::size_t>(count(engine));
  }
  place_uniform(ps, n, seed);
  return ps;
}

double squared_distance(const Region& region, const Point& a, const Point& b) noexcept {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  if (region.boundary == Boundary::torus) {
    dx = std::min(dx, region.width - dx);
    dy = std::min(dy, region.height - dy);
  }
  return dx * dx + dy * dy;
}

SpatialGraph::SpatialGraph(PointSet points, double radius)
    : points_(std::move(points)), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("radius must be > 0");
  }
  const Region& region = points_.region;
  const std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = points_.coords[i];
    if (!region.contains(p.x, p.y)) {
      throw std::invalid_argument("points[" + std::to_string(i) + "] lies outside the region");
    }
  }

  // Grid of cells with side >= radius: every neighbor lies in the 3x3 block.
  const auto cells_along = [&](double extent) {
    return static_cast<std::size_t>(std::max(1.0, std::floor(extent / radius)));
  };
  const std::size_t ncx = cells_along(region.width);
  const std::size_t ncy = cells_along(region.height);
  const double cw = region.width / static_cast<double>(ncx);
  const double ch = region.height / static_cast<double>(ncy);
  const auto cell_x = [&](double x) {
    return std::min(ncx - 1, static_cast<std::size_t>(x / cw));
  };
  const auto cell_y = [&](double y) {
    return std::min(ncy - 1, static_cast<std::size_t>(y / ch));
  };

  std::vector<std::size_t> cell_start(ncx * ncy + 1, 0);
  std::vector<std::size_t> cell_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell_of[i] = cell_y(points_.coords[i].y) * ncx + cell_x(points_.coords[i].x);
    ++cell_start[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < ncx * ncy; ++c) cell_start[c + 1] += cell_start[c];
  std::vector<NodeId> cell_members(n);
  {
    std::vector<std::size_t> fill(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) cell_members[fill[cell_of[i]]++] = static_cast<NodeId>(i);
  }

  const bool torus = region.boundary == Boundary::torus;
  const double r2 = radius * radius;
  offsets_.assign(n + 1, 0);
  neighbors_.clear();
  std::vector<std::size_t> block;
  block.reserve(9);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cx = cell_of[i] % ncx;
    const std::size_t cy = cell_of[i] / ncx;
    block.clear();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        auto nx = static_cast<std::ptrdiff_t>(cx) + dx;
        auto ny = static_cast<std::ptrdiff_t>(cy) + dy;
        if (torus) {
          nx = (nx + static_cast<std::ptrdiff_t>(ncx)) % static_cast<std::ptrdiff_t>(ncx);
          ny = (ny + static_cast<std::ptrdiff_t>(ncy)) % static_cast<std::ptrdiff_t>(ncy);
        } else if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(ncx) ||
                   ny >= static_cast<std::ptrdiff_t>(ncy)) {
          continue;
        }
        block.push_back(static_cast<std::size_t>(ny) * ncx + static_cast<std::size_t>(nx));
      }
    }
    // Small tori wrap onto the same cell more than once.
    std::sort(block.begin(), block.end());
    block.erase(std::unique(block.begin(), block.end()), block.end());

    const std::size_t row_begin = neighbors_.size();
    for (std::size_t c : block) {
      for (std::size_t k = cell_start[c]; k < cell_start[c + 1]; ++k) {
        const NodeId j = cell_members[k];
        if (j == i) continue;
        if (squared_distance(region, points_.coords[i], points_.coords[j]) <= r2) {
          neighbors_.push_back(j);
        }
      }
    }
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(row_begin), neighbors_.end());
    offsets_[i + 1] = neighbors_.size();
  }

  degrees_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    degrees_[i] = static_cast<std::uint32_t>(offsets_[i + 1] - offsets_[i]);
  }
}

std::size_t SpatialGraph::max_degree() const noexcept {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

double SpatialGraph::mean_degree() const noexcept {
  if (degrees_.empty()) return 0.0;
  return static_cast<double>(neighbors_.size()) / static_cast<double>(degrees_.size());
}

bool SpatialGraph::adjacent(NodeId u, NodeId v) const noexcept {
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

SpatialGraph build_graph(PointSet points, double radius) {
  return SpatialGraph(std::move(points), radius);
}

ComponentLabeling components(const SpatialGraph& graph, std::span<const std::uint8_t> alive) {
  const std::size_t n = graph.size();
  if (alive.size() != n) {
    throw std::invalid_argument("alive mask length " + std::to_string(alive.size()) +
                                " does not match node count " + std::to_string(n));
  }
  UnionFind uf(n);
  for (NodeId u = 0; u < n; ++u) {
    if (!alive[u]) continue;
    for (NodeId v : graph.neighbors(u)) {
      if (v > u && alive[v]) uf.unite(u, v);
    }
  }

  ComponentLabeling out;
  out.id.assign(n, kNoComponent);
  std::vector<std::uint32_t> root_label(n, kNoComponent);
  for (NodeId u = 0; u < n; ++u) {
    if (!alive[u]) continue;
    const std::uint32_t root = uf.find(u);
    if (root_label[root] == kNoComponent) {
      root_label[root] = static_cast<std::uint32_t>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.id[u] = root_label[root];
    ++out.sizes[out.id[u]];
  }
  for (std::uint32_t c = 0; c < out.sizes.size(); ++c) {
    if (out.sizes[c] > out.largest_size) {
      out.largest_size = out.sizes[c];
      out.largest_id = c;
    }
  }
  return out;
}

ComponentLabeling components(const SpatialGraph& graph) {
  const Mask alive = all_alive(graph.size());
  return components(graph, alive);
}

Rect full_rect(const Region& region) noexcept {
  return {0.0, 0.0, region.width, region.height};
}

bool crosses(const SpatialGraph& graph, std::span<const std::uint8_t> alive, const Rect& rect,
             Direction direction) {
  const Region& region = graph.region();
  if (region.boundary == Boundary::torus) {
    throw std::invalid_argument("crossing events are undefined on a torus region");
  }
  if (alive.size() != graph.size()) {
    throw std::invalid_argument("alive mask length does not match node count");
  }
  if (!(rect.x1 < rect.x2) || !(rect.y1 < rect.y2) || rect.x1 < 0.0 || rect.y1 < 0.0 ||
      rect.x2 > region.width || rect.y2 > region.height) {
    throw std::invalid_argument("crossing rectangle must be non-empty and inside the region");
  }

  const auto& pts = graph.points().coords;
  const double r = graph.radius();
  const std::size_t n = graph.size();
  const auto inside = [&](NodeId v) {
    const Point& p = pts[v];
    return alive[v] && p.x >= rect.x1 && p.x <= rect.x2 && p.y >= rect.y1 && p.y <= rect.y2;
  };
  // Entry/exit slack is strict on both ends: 0 < gap < r.
  const auto near = [r](double gap) { return gap > 0.0 && gap < r; };
  const auto is_start = [&](NodeId v) {
    return direction == Direction::left_right ? near(pts[v].x - rect.x1) : near(rect.y2 - pts[v].y);
  };
  const auto is_end = [&](NodeId v) {
    return direction == Direction::left_right ? near(rect.x2 - pts[v].x) : near(pts[v].y - rect.y1);
  };

  UnionFind uf(n);
  for (NodeId u = 0; u < n; ++u) {
    if (!inside(u)) continue;
    for (NodeId v : graph.neighbors(u)) {
      if (v > u && inside(v)) uf.unite(u, v);
    }
  }
  std::vector<std::uint8_t> root_has_start(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    if (inside(u) && is_start(u)) root_has_start[uf.find(u)] = 1;
  }
  for (NodeId u = 0; u < n; ++u) {
    if (inside(u) && is_end(u) && root_has_start[uf.find(u)]) return true;
  }
  return false;
}

}  // namespace geonet
