#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "yaf/errors.hpp"
#include "yaf/grid.hpp"

namespace yaf {

/**
 * Strictly positive, finite scalar field over a radial grid.
 *
 * This is the conformal factor: the evolving metric is v^{4/(n-2)} times the
 * flat background.  Positivity and finiteness are construction invariants;
 * any update that would break them must be rejected by the caller (steppers
 * raise instead of clipping).
 */
class ConformalField {
 public:
  ConformalField(RadialGrid::Ptr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) {
      throw InvalidArgumentError("ConformalField: null grid");
    }
    if (values_.size() != grid_->size()) {
      throw InvalidArgumentError("ConformalField: " + std::to_string(values_.size()) +
                                 " values on a grid of " + std::to_string(grid_->size()) +
                                 " nodes");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
        throw PositivityError("ConformalField: value " + std::to_string(values_[i]) +
                                  " at node " + std::to_string(i) + " (r = " +
                                  std::to_string(grid_->node(i)) + ") is not finite and positive",
                              i, values_[i]);
      }
    }
  }

  static ConformalField constant(RadialGrid::Ptr grid, double value) {
    std::vector<double> vals(grid ? grid->size() : 0, value);
    return ConformalField(std::move(grid), std::move(vals));
  }

  template <class Fn>
  static ConformalField from_function(RadialGrid::Ptr grid, Fn&& fn) {
    if (!grid) {
      throw InvalidArgumentError("ConformalField: null grid");
    }
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      vals[i] = fn(grid->node(i));
    }
    return ConformalField(std::move(grid), std::move(vals));
  }

  const RadialGrid::Ptr& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  double min_value() const {
    double m = values_.front();
    for (double v : values_) m = std::min(m, v);
    return m;
  }
  double max_value() const {
    double m = values_.front();
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  /// Replace the values, re-running the positivity check.
  ConformalField with_values(std::vector<double> values) const {
    return ConformalField(grid_, std::move(values));
  }

 private:
  RadialGrid::Ptr grid_;
  std::vector<double> values_;
};

/// Throws GridMismatchError unless both objects share one node layout.
inline void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* where) {
  if (!a.same_layout(b)) {
    throw GridMismatchError(std::string(where) + ": operands live on different grids");
  }
}

inline void require_size(std::size_t got, std::size_t want, const char* where) {
  if (got != want) {
    throw InvalidArgumentError(std::string(where) + ": expected " + std::to_string(want) +
                               " values, got " + std::to_string(got));
  }
}

}  // namespace yaf
