#pragma once

#include "depthbench/raster.hpp"

namespace depthbench {

struct DepthClamp {
  double min_depth;
  double max_depth;

  DepthClamp(double min_depth, double max_depth);
};

/// Metric depth from canonical inverse depth: D = f_px / (w * C), clamped.
/// C == 0 (sky, infinitely far) maps to the clamp maximum and stays valid.
DepthMap canonical_to_metric(const InverseDepthMap& canonical, const CameraModel& cam,
                             const DepthClamp& clamp);

/// C = f_px / (w * D). Throws DomainError on a valid pixel with D <= 0.
InverseDepthMap metric_to_canonical(const DepthMap& depth, const CameraModel& cam);

/// Marks pixels outside [min_depth, max_depth] invalid. Values are untouched.
DepthMap apply_validity(const DepthMap& depth, const ValidityPolicy& policy);

}  // namespace depthbench
