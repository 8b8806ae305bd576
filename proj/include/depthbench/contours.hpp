#pragma once

// Occluding contours between 4-connected neighbor pixels.
//
// A depth contour between neighbors i and j fires when d(j) / d(i) > 1 + t/100
// (strict). Each unordered neighbor pair is stored once with a direction
// telling which endpoint is the far (background) side:
//
//   +1  second pixel (right / below) is farther
//   -1  first pixel (left / above) is farther
//    0  no contour
//
// A mask contour fires where exactly one endpoint is foreground; the
// background endpoint plays the role of the far side.

#include <cstdint>
#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench {

inline constexpr std::int8_t kFarSecond = 1;
inline constexpr std::int8_t kFarFirst = -1;

struct ContourField {
  int width = 0;
  int height = 0;
  // Pair ((r,c),(r,c+1)) at r*(W-1)+c.
  std::vector<std::int8_t> horizontal;
  std::vector<std::uint8_t> horizontal_valid;
  // Pair ((r,c),(r+1,c)) at r*W+c.
  std::vector<std::int8_t> vertical;
  std::vector<std::uint8_t> vertical_valid;

  ContourField() = default;
  ContourField(int width, int height);

  std::size_t fired_count() const noexcept;
  bool operator==(const ContourField&) const = default;
};

/// Ratio threshold 1 + t/100 used by every contour test.
inline double ratio_threshold(double t_percent) { return 1.0 + t_percent / 100.0; }

ContourField contours_from_depth(const DepthMap& d, double t_percent);
ContourField contours_from_mask(const BinaryMask& b);

/// Within each maximal run of consecutive fired pairs of the same direction
/// (along rows for horizontal pairs, along columns for vertical pairs), keep
/// only the pair with the largest depth ratio; ties keep the lowest index.
ContourField suppress_non_maximum(const DepthMap& d, const ContourField& field);

}  // namespace depthbench
