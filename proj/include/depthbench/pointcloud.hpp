#pragma once

#include <array>
#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench {

using Point3 = std::array<double, 3>;

struct PointCloud {
  std::vector<Point3> points;
};

/// Pinhole back-projection with the principal point at (W/2, H/2):
/// X = (c - W/2) d / f, Y = (r - H/2) d / f, Z = d. Invalid pixels are
/// skipped; points come out in row-major pixel order.
PointCloud unproject(const DepthMap& depth, const CameraModel& cam);

struct PointCloudMetrics {
  double chamfer = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double iou = 0.0;
};

/// chamfer = mean_a min_b |a-b| + mean_b min_a |a-b|; a point counts as
/// matched when its nearest neighbor is closer than `tau`.
/// IoU = TP / (|a| + |b| - TP), TP = (precision |a| + recall |b|) / 2.
/// Nearest neighbors come from a uniform hash grid with cell size `tau`.
PointCloudMetrics pc_metrics(const PointCloud& a, const PointCloud& b, double tau);

namespace reference {

/// O(|a| |b|) brute force.
PointCloudMetrics pc_metrics(const PointCloud& a, const PointCloud& b, double tau);

}  // namespace reference
}  // namespace depthbench
