#include "glassseg/mask.hpp"

#include <algorithm>
#include <string>

namespace glassseg {

BinaryMask::BinaryMask(int height, int width) : grid_(height, width, 0) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("mask must be at least 1x1, got " +
                                std::to_string(height) + "x" +
                                std::to_string(width));
  }
}

BinaryMask BinaryMask::from_values(int height, int width,
                                   std::span<const std::uint8_t> values) {
  BinaryMask mask(height, width);
  if (values.size() != mask.size()) {
    throw std::invalid_argument("mask data size does not match dimensions");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1) {
      throw std::invalid_argument("mask value " + std::to_string(values[i]) +
                                  " at index " + std::to_string(i) +
                                  " is not 0 or 1");
    }
  }
  std::vector<std::uint8_t> copy(values.begin(), values.end());
  return BinaryMask(Grid<std::uint8_t>(height, width, std::move(copy)));
}

std::size_t BinaryMask::count() const {
  auto v = grid_.values();
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1));
}

namespace {

template <typename Op>
BinaryMask combine(const Grid<std::uint8_t>& a, const Grid<std::uint8_t>& b,
                   const char* what, Op op) {
  require_same_shape(a, b, what);
  std::vector<std::uint8_t> out(a.size());
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(va[i], vb[i]);
  return BinaryMask::from_values(a.height(), a.width(), out);
}

}  // namespace

BinaryMask BinaryMask::operator|(const BinaryMask& other) const {
  return combine(grid_, other.grid_, "mask union",
                 [](auto a, auto b) -> std::uint8_t { return a | b; });
}

BinaryMask BinaryMask::operator&(const BinaryMask& other) const {
  return combine(grid_, other.grid_, "mask intersection",
                 [](auto a, auto b) -> std::uint8_t { return a & b; });
}

BinaryMask BinaryMask::minus(const BinaryMask& other) const {
  return combine(grid_, other.grid_, "mask difference",
                 [](auto a, auto b) -> std::uint8_t { return a & (1 - b); });
}

BinaryMask BinaryMask::operator~() const {
  BinaryMask out = *this;
  for (auto& v : out.grid_.values()) v = 1 - v;
  return out;
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
  require_same_shape(grid_, other.grid_, "mask subset");
  auto va = grid_.values();
  auto vb = other.grid_.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i] && !vb[i]) return false;
  }
  return true;
}

WeightMap::WeightMap(Grid<float> values) : values_(std::move(values)) {
  for (float v : values_.values()) {
    if (!(v >= 1.0f)) {
      throw std::invalid_argument("weight map values must be >= 1");
    }
  }
}

WeightMap WeightMap::scaled(float factor) const {
  if (!(factor >= 1.0f)) {
    throw std::invalid_argument("weight scale factor must be >= 1");
  }
  Grid<float> out = values_;
  for (auto& v : out.values()) v *= factor;
  return WeightMap(std::move(out));
}

}  // namespace glassseg
