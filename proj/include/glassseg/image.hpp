#pragma once

#include <vector>

#include "glassseg/grid.hpp"

namespace glassseg {

// Planar RGB image, 3×H×W, values in [0,1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int height, int width)
      : height_(height), width_(width),
        data_(static_cast<std::size_t>(3) * height * width, 0.0f) {}

  int height() const { return height_; }
  int width() const { return width_; }

  float& at(int c, int y, int x) { return data_[offset(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[offset(c, y, x)]; }

  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t offset(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

}  // namespace glassseg
