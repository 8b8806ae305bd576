#include "depthbench/conversion.hpp"

#include <algorithm>
#include <cmath>

namespace depthbench {

DepthClamp::DepthClamp(double min_depth, double max_depth)
    : min_depth(min_depth), max_depth(max_depth) {
  if (!(min_depth > 0.0 && min_depth < max_depth)) {
    throw DomainError("depth clamp requires 0 < min < max");
  }
}

DepthMap canonical_to_metric(const InverseDepthMap& canonical, const CameraModel& cam,
                             const DepthClamp& clamp) {
  canonical.require_non_negative("canonical_to_metric");
  DepthMap out(canonical.width(), canonical.height(), 0.0, false);
  const double scale = cam.focal_px / cam.width;
  const auto in = canonical.values();
  const auto in_valid = canonical.valid();
  auto values = out.values();
  auto valid = out.valid();
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!in_valid[i]) continue;
    const double c = in[i];
    // scale / 0 is +inf, which the clamp pulls down to max_depth.
    const double d = c > 0.0 ? scale / c : clamp.max_depth;
    values[i] = std::clamp(d, clamp.min_depth, clamp.max_depth);
    valid[i] = 1;
  }
  return out;
}

InverseDepthMap metric_to_canonical(const DepthMap& depth, const CameraModel& cam) {
  depth.require_positive("metric_to_canonical");
  InverseDepthMap out(depth.width(), depth.height(), 0.0, false);
  const double scale = cam.focal_px / cam.width;
  const auto in = depth.values();
  const auto in_valid = depth.valid();
  auto values = out.values();
  auto valid = out.valid();
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!in_valid[i]) continue;
    values[i] = scale / in[i];
    valid[i] = 1;
  }
  return out;
}

DepthMap apply_validity(const DepthMap& depth, const ValidityPolicy& policy) {
  DepthMap out = depth;
  const auto values = out.values();
  auto valid = out.valid();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid[i] && !policy.accepts(values[i])) valid[i] = 0;
  }
  return out;
}

}  // namespace depthbench
