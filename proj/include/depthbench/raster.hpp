#pragma once

// Shared raster and camera types. All rasters are row-major with (row, col)
// indexing and the origin at the top-left pixel.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "depthbench/errors.hpp"

namespace depthbench {

/// A dense row-major raster of doubles with a per-pixel validity flag.
class Field {
 public:
  Field() = default;
  Field(int width, int height, double fill = 0.0, bool valid = true);
  Field(int width, int height, std::vector<double> values);
  Field(int width, int height, std::vector<double> values, std::vector<std::uint8_t> valid);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  double at(int row, int col) const noexcept { return values_[index(row, col)]; }
  double& at(int row, int col) noexcept { return values_[index(row, col)]; }
  bool valid_at(int row, int col) const noexcept { return valid_[index(row, col)] != 0; }
  void set_valid(int row, int col, bool v) noexcept { valid_[index(row, col)] = v ? 1 : 0; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const std::uint8_t> valid() const noexcept { return valid_; }
  std::span<std::uint8_t> valid() noexcept { return valid_; }

  std::size_t valid_count() const noexcept;
  bool same_shape(const Field& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Field&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
};

/// Throws StructuralError naming both shapes when `a` and `b` differ.
void require_same_shape(const Field& a, const Field& b, const char* what);

std::string shape_string(int width, int height);

/// Metric depth in meters. Valid pixels are expected to be finite and > 0;
/// operations that rely on it call `require_positive()`.
class DepthMap : public Field {
 public:
  using Field::Field;
  explicit DepthMap(Field f) : Field(std::move(f)) {}

  void require_positive(const char* what) const;
};

/// Canonical inverse depth (1/m up to the focal scaling), >= 0 where valid.
class InverseDepthMap : public Field {
 public:
  using Field::Field;
  explicit InverseDepthMap(Field f) : Field(std::move(f)) {}

  void require_non_negative(const char* what) const;
};

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool at(int row, int col) const noexcept {
    return values_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool v) noexcept {
    values_[static_cast<std::size_t>(row) * width_ + col] = v ? 1 : 0;
  }
  std::span<const std::uint8_t> values() const noexcept { return values_; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

/// Alpha matte with values in [0, 1].
class AlphaMatte {
 public:
  AlphaMatte(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const double> values() const noexcept { return values_; }

  BinaryMask threshold(double alpha_threshold) const;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

/// Horizontal focal length in pixels and the image width it refers to.
struct CameraModel {
  double focal_px;
  double width;

  CameraModel(double focal_px, double width);
};

/// Range of trusted ground-truth depth, in meters.
struct ValidityPolicy {
  double min_depth;
  double max_depth;

  ValidityPolicy(double min_depth, double max_depth);

  bool accepts(double depth) const noexcept { return depth >= min_depth && depth <= max_depth; }

  static ValidityPolicy permissive();
};

}  // namespace depthbench
