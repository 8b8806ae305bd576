#pragma once

// Boundary precision / recall / F1 from occluding contours, and the
// threshold-weighted scores built on them.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "depthbench/contours.hpp"
#include "depthbench/raster.hpp"

namespace depthbench {

/// Thresholds spaced linearly from t_min to t_max (percent), weighted by t.
struct ThresholdSchedule {
  double t_min = 5.0;
  double t_max = 25.0;
  int steps = 21;

  void validate() const;
  std::vector<double> thresholds() const;
  /// w_t = t / sum(t); sums to 1 and increases with t.
  std::vector<double> weights() const;
};

/// Pair counts at one threshold, over jointly valid pairs.
struct PairCounts {
  std::int64_t predicted = 0;
  std::int64_t reference = 0;
  std::int64_t matched = 0;

  PairCounts& operator+=(const PairCounts& o) {
    predicted += o.predicted;
    reference += o.reference;
    matched += o.matched;
    return *this;
  }
  bool operator==(const PairCounts&) const = default;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// No predicted and no reference pairs scores 1/1/1; otherwise an empty side
/// scores 0 for the undefined ratio.
PrecisionRecall precision_recall(const PairCounts& counts);

/// Matches require the same pair to fire in the same direction in both
/// fields, with both fields valid there.
PairCounts count_matches(const ContourField& predicted, const ContourField& reference);

/// Single-threshold P/R/F1 of `pred`'s contours against `gt_contours`. With
/// `nms`, the prediction's contours are thinned first; `gt_contours` is used
/// as given.
PrecisionRecall boundary_pr(const DepthMap& pred, const ContourField& gt_contours,
                            double t_percent, bool nms);

/// Depth-vs-depth convenience overload; with `nms`, both sides are thinned.
PrecisionRecall boundary_pr(const DepthMap& pred, const DepthMap& gt, double t_percent, bool nms);

/// Fraction of mask contours reproduced by the prediction with the
/// background side farther. Empty when the mask has no contour pair inside
/// the prediction's valid region.
std::optional<double> boundary_recall_mask(const DepthMap& pred, const BinaryMask& mask,
                                           double t_percent, bool nms);

struct ThresholdScore {
  double t;
  double score;
};

/// Sum of w_t * score(t). Throws StructuralError if a schedule threshold has
/// no score.
double weighted_boundary_score(std::span<const ThresholdScore> per_threshold,
                               const ThresholdSchedule& schedule);

// ---------------------------------------------------------------------------
// Whole-schedule kernels (row/column parallel, exact integer counts).

std::vector<PairCounts> boundary_counts(const DepthMap& pred, const DepthMap& gt,
                                        const ThresholdSchedule& schedule, bool nms);

std::vector<PairCounts> mask_counts(const DepthMap& pred, const BinaryMask& mask,
                                    const ThresholdSchedule& schedule, bool nms);

struct BoundaryScore {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::vector<PrecisionRecall> per_threshold;
};

BoundaryScore score_from_counts(std::span<const PairCounts> counts,
                                const ThresholdSchedule& schedule);

/// Weighted F1 of depth contours over the schedule.
BoundaryScore weighted_boundary_f1(const DepthMap& pred, const DepthMap& gt,
                                   const ThresholdSchedule& schedule, bool nms);

/// Weighted mask recall over the schedule; empty when undefined.
std::optional<double> weighted_mask_recall(const DepthMap& pred, const BinaryMask& mask,
                                           const ThresholdSchedule& schedule, bool nms);
std::optional<double> mask_recall_from_counts(std::span<const PairCounts> counts,
                                              const ThresholdSchedule& schedule);

namespace reference {

/// Per-threshold composition of contours_from_depth, suppress_non_maximum and
/// count_matches. Serial.
std::vector<PairCounts> boundary_counts(const DepthMap& pred, const DepthMap& gt,
                                        const ThresholdSchedule& schedule, bool nms);
std::vector<PairCounts> mask_counts(const DepthMap& pred, const BinaryMask& mask,
                                    const ThresholdSchedule& schedule, bool nms);

}  // namespace reference
}  // namespace depthbench
