#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glassseg {

// Thrown whenever two arrays that must share H×W do not.
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Row-major H×W array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : height_(height), width_(width) {
    if (height < 0 || width < 0) {
      throw std::invalid_argument("grid dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(height) * width, fill);
  }
  Grid(int height, int width, std::vector<T> values)
      : height_(height), width_(width), data_(std::move(values)) {
    if (height < 0 || width < 0 ||
        data_.size() != static_cast<std::size_t>(height) * width) {
      throw std::invalid_argument("grid data size does not match " +
                                  std::to_string(height) + "x" +
                                  std::to_string(width));
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int y, int x) { return data_[index(y, x)]; }
  const T& operator()(int y, int x) const { return data_[index(y, x)]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(what) + ": shapes " +
                        std::to_string(a.height()) + "x" +
                        std::to_string(a.width()) + " and " +
                        std::to_string(b.height()) + "x" +
                        std::to_string(b.width()) + " are incompatible");
  }
}

}  // namespace glassseg
