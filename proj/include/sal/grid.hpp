#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sal/error.hpp"

namespace sal {

struct Dims {
  int width = 0;
  int height = 0;

  std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  bool operator==(const Dims&) const = default;
};

// Row-major H x W scalar field.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : dims_{width, height}, data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative grid dimensions");
  }
  explicit Grid(Dims d, T fill = T{}) : Grid(d.width, d.height, fill) {}

  int width() const { return dims_.width; }
  int height() const { return dims_.height; }
  Dims dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) {
    assert(x >= 0 && x < dims_.width && y >= 0 && y < dims_.height);
    return data_[static_cast<std::size_t>(y) * dims_.width + x];
  }
  const T& operator()(int x, int y) const {
    assert(x >= 0 && x < dims_.width && y >= 0 && y < dims_.height);
    return data_[static_cast<std::size_t>(y) * dims_.width + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * dims_.width, static_cast<std::size_t>(dims_.width)}; }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * dims_.width, static_cast<std::size_t>(dims_.width)};
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool operator==(const Grid&) const = default;

 private:
  Dims dims_;
  std::vector<T> data_;
};

using Map = Grid<double>;
using Mask = Grid<std::uint8_t>;
using CountGrid = Grid<std::uint32_t>;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// Interleaved 8-bit RGB raster.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const { return dims_.width; }
  int height() const { return dims_.height; }
  Dims dims() const { return dims_; }

  Rgb at(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * dims_.width + x);
    return {bytes_[i], bytes_[i + 1], bytes_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * dims_.width + x);
    bytes_[i] = c.r;
    bytes_[i + 1] = c.g;
    bytes_[i + 2] = c.b;
  }

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::span<std::uint8_t> bytes() { return bytes_; }

  bool operator==(const RgbImage&) const = default;

 private:
  Dims dims_;
  std::vector<std::uint8_t> bytes_;
};

// Luma (Rec. 601 weights) in [0,1].
Map to_luma(const RgbImage& image);

inline void require_same_dims(Dims a, Dims b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::DimensionMismatch, what);
}

}  // namespace sal
