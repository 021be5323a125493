#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "yaf/errors.hpp"

namespace yaf {

/** Node placement law of a radial grid. */
enum class Stretch {
  uniform,    ///< equispaced nodes
  geometric,  ///< node spacing grows by a constant ratio (needs r_inner > 0)
  custom,     ///< caller-supplied strictly increasing nodes
};

inline const char* to_string(Stretch s) {
  switch (s) {
    case Stretch::uniform: return "uniform";
    case Stretch::geometric: return "geometric";
    case Stretch::custom: return "custom";
  }
  return "?";
}

/**
 * One-dimensional radial grid for rotationally symmetric fields in R^n.
 *
 * Nodes are strictly increasing; r_inner = 0 marks an origin-regular grid
 * (fields are even in r there and the flux through r = 0 vanishes), while
 * r_inner > 0 models an excised compact core whose surface carries Dirichlet
 * data.  The grid is immutable after construction; fields reference it through
 * a shared pointer so snapshots stay cheap.
 */
class RadialGrid {
 public:
  using Ptr = std::shared_ptr<const RadialGrid>;

  static Ptr uniform(int dim, double r_inner, double r_outer, std::size_t count) {
    check_common(dim, r_inner, r_outer, count);
    std::vector<double> nodes(count);
    const double h = (r_outer - r_inner) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
      nodes[i] = r_inner + h * static_cast<double>(i);
    }
    nodes.back() = r_outer;
    return Ptr(new RadialGrid(dim, std::move(nodes), Stretch::uniform, 1.0));
  }

  /// Geometric stretch: spacings h_{i+1} = q h_i with q chosen from the
  /// endpoints.  Requires r_inner > 0 so that the ratio is well defined.
  static Ptr geometric(int dim, double r_inner, double r_outer, std::size_t count) {
    check_common(dim, r_inner, r_outer, count);
    if (r_inner <= 0.0) {
      throw InvalidArgumentError("RadialGrid::geometric: requires r_inner > 0");
    }
    const double q = std::pow(r_outer / r_inner, 1.0 / static_cast<double>(count - 1));
    std::vector<double> nodes(count);
    for (std::size_t i = 0; i < count; ++i) {
      nodes[i] = r_inner * std::pow(q, static_cast<double>(i));
    }
    nodes.back() = r_outer;
    return Ptr(new RadialGrid(dim, std::move(nodes), Stretch::geometric, q));
  }

  static Ptr from_nodes(int dim, std::vector<double> nodes) {
    if (nodes.size() < 3) {
      throw InvalidArgumentError("RadialGrid: need at least 3 nodes, got " +
                                 std::to_string(nodes.size()));
    }
    check_common(dim, nodes.front(), nodes.back(), nodes.size());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (!(nodes[i] < nodes[i + 1])) {
        throw InvalidArgumentError("RadialGrid: nodes must be strictly increasing (violated at index " +
                                   std::to_string(i + 1) + ")");
      }
    }
    return Ptr(new RadialGrid(dim, std::move(nodes), Stretch::custom, 0.0));
  }

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  double r_inner() const noexcept { return nodes_.front(); }
  double r_outer() const noexcept { return nodes_.back(); }
  Stretch stretch() const noexcept { return stretch_; }
  double stretch_ratio() const noexcept { return ratio_; }

  /// True when the grid reaches the coordinate origin and fields are treated
  /// as radially even there (zero flux through r = 0).
  bool origin_regular() const noexcept { return nodes_.front() == 0.0; }

  /// Spacing of the cell [r_i, r_{i+1}].
  double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

  double min_spacing() const {
    double h = nodes_[1] - nodes_[0];
    for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
      h = std::min(h, nodes_[i + 1] - nodes_[i]);
    }
    return h;
  }

  /// Largest index with node(i) <= r, clamped to the node range.
  std::size_t index_below(double r) const {
    if (r <= nodes_.front()) return 0;
    if (r >= nodes_.back()) return nodes_.size() - 1;
    std::size_t lo = 0, hi = nodes_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (nodes_[mid] <= r ? lo : hi) = mid;
    }
    return lo;
  }

  bool same_layout(const RadialGrid& other) const noexcept {
    return dim_ == other.dim_ && nodes_ == other.nodes_;
  }

 private:
  RadialGrid(int dim, std::vector<double> nodes, Stretch stretch, double ratio)
      : dim_(dim), nodes_(std::move(nodes)), stretch_(stretch), ratio_(ratio) {}

  static void check_common(int dim, double r_inner, double r_outer, std::size_t count) {
    if (dim < 3) {
      throw InvalidArgumentError("RadialGrid: dimension must be >= 3, got " + std::to_string(dim));
    }
    if (count < 3) {
      throw InvalidArgumentError("RadialGrid: need at least 3 nodes, got " + std::to_string(count));
    }
    if (!(r_inner >= 0.0) || !std::isfinite(r_inner) || !std::isfinite(r_outer)) {
      throw InvalidArgumentError("RadialGrid: radii must be finite with r_inner >= 0");
    }
    if (!(r_inner < r_outer)) {
      throw InvalidArgumentError("RadialGrid: requires r_inner < r_outer");
    }
  }

  int dim_;
  std::vector<double> nodes_;
  Stretch stretch_;
  double ratio_;
};

}  // namespace yaf
