#pragma once

#include <cstdint>
#include <vector>

#include "silcal/common/errors.hpp"

namespace silcal {

/// Dense row-major H x W raster. Pixel (row, col) = (v, u); v grows down.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int height, int width, T fill = T{})
      : height_(height), width_(width),
        data_(static_cast<std::size_t>(height) * width, fill) {
    if (height <= 0 || width <= 0)
      throw InvalidParameterError("image dimensions must be positive");
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  const T& at(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  T* row(int r) { return data_.data() + static_cast<std::size_t>(r) * width_; }
  const T* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * width_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.data_ == b.data_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

/// {0,1} silhouette mask.
using BinaryMask = Image<std::uint8_t>;

/// Soft occupancy in [0,1]. Double precision keeps gradient checks of
/// losses summed over ~3e5 pixels well below the comparison tolerance.
using SoftSilhouette = Image<double>;

template <typename T>
inline void require_same_shape(const Image<T>& a, int h, int w, const char* what) {
  if (a.height() != h || a.width() != w)
    throw InvalidParameterError(std::string(what) + ": image dimensions disagree");
}

}  // namespace silcal
