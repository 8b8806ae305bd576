#pragma once

#include <optional>
#include <span>
#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench {

/// Percentage of jointly valid pixels with max(pred/gt, gt/pred) < 1.25^k.
double delta_k(const DepthMap& pred, const DepthMap& gt, int k);

/// mean |pred - gt| / gt
double abs_rel(const DepthMap& pred, const DepthMap& gt);
/// mean |log10 pred - log10 gt|
double log10_err(const DepthMap& pred, const DepthMap& gt);
/// 100 * standard deviation of (ln pred - ln gt).
double si_log(const DepthMap& pred, const DepthMap& gt);

struct DepthMetricReport {
  double delta1 = 0, delta2 = 0, delta3 = 0;
  double abs_rel = 0, log10 = 0, si_log = 0;
  std::optional<double> pc_chamfer, pc_f, pc_iou;
};

/// All per-pixel metrics in one pass. Row partials are summed in row order,
/// so the result does not depend on the thread count.
DepthMetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt);

struct FocalPair {
  double predicted_mm;
  double ground_truth_mm;
};

/// Percentage of pairs with |f_pred - f_gt| / f_gt < threshold, one entry per
/// threshold.
std::vector<double> focal_deltas(std::span<const FocalPair> pairs,
                                 std::span<const double> thresholds);

namespace reference {

DepthMetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt);

}  // namespace reference
}  // namespace depthbench
