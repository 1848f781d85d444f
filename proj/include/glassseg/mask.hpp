#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glassseg/grid.hpp"

namespace glassseg {

/// H×W segmentation mask whose elements are exactly 0 or 1, H, W ≥ 1.
class BinaryMask {
 public:
  BinaryMask(int height, int width);

  /// Validates that every value is 0 or 1.
  static BinaryMask from_values(int height, int width,
                                std::span<const std::uint8_t> values);

  int height() const { return grid_.height(); }
  int width() const { return grid_.width(); }
  std::size_t size() const { return grid_.size(); }

  bool operator()(int y, int x) const { return grid_(y, x) != 0; }
  void set(int y, int x, bool on) { grid_(y, x) = on ? 1 : 0; }

  std::span<const std::uint8_t> values() const { return grid_.values(); }
  const Grid<std::uint8_t>& grid() const { return grid_; }

  std::size_t count() const;
  bool any() const { return count() > 0; }
  bool same_shape(const BinaryMask& other) const {
    return grid_.same_shape(other.grid_);
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return grid_.same_shape(other);
  }

  BinaryMask operator|(const BinaryMask& other) const;
  BinaryMask operator&(const BinaryMask& other) const;
  BinaryMask operator~() const;
  /// Pixels set here and not in `other`.
  BinaryMask minus(const BinaryMask& other) const;
  /// True iff every set pixel of this mask is set in `other`.
  bool subset_of(const BinaryMask& other) const;

  bool operator==(const BinaryMask&) const = default;

 private:
  explicit BinaryMask(Grid<std::uint8_t> grid) : grid_(std::move(grid)) {}

  Grid<std::uint8_t> grid_;
};

/// Contour-loss spatial weights; every value is ≥ 1.
class WeightMap {
 public:
  explicit WeightMap(Grid<float> values);

  int height() const { return values_.height(); }
  int width() const { return values_.width(); }
  float operator()(int y, int x) const { return values_(y, x); }
  std::span<const float> values() const { return values_.values(); }
  const Grid<float>& grid() const { return values_; }

  /// Multiplies every weight by `factor` (≥ 1 so the floor still holds).
  WeightMap scaled(float factor) const;

 private:
  Grid<float> values_;
};

}  // namespace glassseg
