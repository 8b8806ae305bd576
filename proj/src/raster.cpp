#include "depthbench/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace depthbench {
namespace {

std::size_t checked_area(int width, int height) {
  if (width < 0 || height < 0) {
    throw StructuralError("negative raster dimensions " + shape_string(width, height));
  }
  const auto area = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  if (area > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
    throw StructuralError("raster of " + shape_string(width, height) + " exceeds 2^31 pixels");
  }
  return static_cast<std::size_t>(area);
}

}  // namespace

std::string shape_string(int width, int height) {
  return std::to_string(width) + "x" + std::to_string(height);
}

Field::Field(int width, int height, double fill, bool valid)
    : width_(width),
      height_(height),
      values_(checked_area(width, height), fill),
      valid_(values_.size(), valid ? 1 : 0) {}

Field::Field(int width, int height, std::vector<double> values)
    : Field(width, height, std::move(values),
            std::vector<std::uint8_t>(checked_area(width, height), 1)) {}

Field::Field(int width, int height, std::vector<double> values, std::vector<std::uint8_t> valid)
    : width_(width), height_(height), values_(std::move(values)), valid_(std::move(valid)) {
  const auto n = checked_area(width, height);
  if (values_.size() != n) {
    throw StructuralError("raster length " + std::to_string(values_.size()) +
                          " does not match " + shape_string(width, height));
  }
  if (valid_.size() != n) {
    throw StructuralError("validity mask length " + std::to_string(valid_.size()) +
                          " does not match " + shape_string(width, height));
  }
}

std::size_t Field::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(valid_.begin(), valid_.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

void require_same_shape(const Field& a, const Field& b, const char* what) {
  if (!a.same_shape(b)) {
    throw StructuralError(std::string(what) + ": shape mismatch " +
                          shape_string(a.width(), a.height()) + " vs " +
                          shape_string(b.width(), b.height()));
  }
}

void DepthMap::require_positive(const char* what) const {
  const auto v = values();
  const auto m = valid();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (m[i] && !(std::isfinite(v[i]) && v[i] > 0.0)) {
      throw DomainError(std::string(what) + ": non-positive depth " + std::to_string(v[i]) +
                        " at valid pixel " + std::to_string(i));
    }
  }
}

void InverseDepthMap::require_non_negative(const char* what) const {
  const auto v = values();
  const auto m = valid();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (m[i] && !(std::isfinite(v[i]) && v[i] >= 0.0)) {
      throw DomainError(std::string(what) + ": negative or non-finite inverse depth at pixel " +
                        std::to_string(i));
    }
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), values_(checked_area(width, height), fill ? 1 : 0) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != checked_area(width, height)) {
    throw StructuralError("mask length does not match " + shape_string(width, height));
  }
  for (auto& v : values_) v = v ? 1 : 0;
}

AlphaMatte::AlphaMatte(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != checked_area(width, height)) {
    throw StructuralError("matte length does not match " + shape_string(width, height));
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("alpha value outside [0, 1]");
  }
}

BinaryMask AlphaMatte::threshold(double alpha_threshold) const {
  std::vector<std::uint8_t> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [&](double a) { return a > alpha_threshold ? 1 : 0; });
  return BinaryMask(width_, height_, std::move(out));
}

CameraModel::CameraModel(double focal_px, double width) : focal_px(focal_px), width(width) {
  if (!(focal_px > 0.0) || !(width > 0.0)) {
    throw DomainError("camera requires focal_px > 0 and width > 0");
  }
}

ValidityPolicy::ValidityPolicy(double min_depth, double max_depth)
    : min_depth(min_depth), max_depth(max_depth) {
  if (!(min_depth > 0.0 && min_depth < max_depth)) {
    throw DomainError("validity policy requires 0 < min_depth < max_depth");
  }
}

ValidityPolicy ValidityPolicy::permissive() {
  return {std::numeric_limits<double>::min(), std::numeric_limits<double>::max()};
}

}  // namespace depthbench
