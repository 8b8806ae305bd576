#pragma once

// Brute-force oracles written independently of the library kernels: they
// enumerate ordered neighbor pairs directly from the definitions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "depthbench/boundary.hpp"
#include "depthbench/raster.hpp"

namespace depthbench::oracle {

/// One ordered pair (near pixel i, far pixel j) of 4-neighbors.
struct OrderedPair {
  int ri, ci, rj, cj;
};

/// All ordered 4-neighbor pairs of a w x h grid.
inline std::vector<OrderedPair> all_ordered_pairs(int w, int h) {
  std::vector<OrderedPair> out;
  const int dr[] = {0, 0, 1, -1};
  const int dc[] = {1, -1, 0, 0};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < 4; ++k) {
        const int r2 = r + dr[k], c2 = c + dc[k];
        if (r2 < 0 || r2 >= h || c2 < 0 || c2 >= w) continue;
        out.push_back({r, c, r2, c2});
      }
    }
  }
  return out;
}

/// c_d(i, j): j is more than t% farther than i, both valid.
inline bool fires(const DepthMap& d, const OrderedPair& p, double t) {
  if (!d.valid_at(p.ri, p.ci) || !d.valid_at(p.rj, p.cj)) return false;
  return d.at(p.rj, p.cj) / d.at(p.ri, p.ci) > 1.0 + t / 100.0;
}

inline double ratio(const DepthMap& d, const OrderedPair& p) {
  return d.at(p.rj, p.cj) / d.at(p.ri, p.ci);
}

/// Survives suppression iff no pair in its maximal same-orientation run
/// along the same line has a larger ratio, and none before it an equal one.
inline bool survives_nms(const DepthMap& d, const OrderedPair& p, double t) {
  const int sr = p.rj - p.ri, sc = p.cj - p.ci;  // far-side offset
  const bool horizontal = sr == 0;
  // Step along the line between neighboring pairs.
  const int lr = horizontal ? 0 : 1, lc = horizontal ? 1 : 0;
  const double own = ratio(d, p);
  auto shifted = [&](int k) {
    return OrderedPair{p.ri + k * lr, p.ci + k * lc, p.ri + k * lr + sr, p.ci + k * lc + sc};
  };
  auto inside = [&](const OrderedPair& q) {
    return q.ri >= 0 && q.rj >= 0 && q.ci >= 0 && q.cj >= 0 && q.ri < d.height() && q.rj < d.height() &&
           q.ci < d.width() && q.cj < d.width();
  };
  for (int k = -1;; --k) {
    const auto q = shifted(k);
    if (!inside(q) || !fires(d, q, t)) break;
    if (ratio(d, q) >= own) return false;
  }
  for (int k = 1;; ++k) {
    const auto q = shifted(k);
    if (!inside(q) || !fires(d, q, t)) break;
    if (ratio(d, q) > own) return false;
  }
  return true;
}

inline bool contour(const DepthMap& d, const OrderedPair& p, double t, bool nms) {
  return fires(d, p, t) && (!nms || survives_nms(d, p, t));
}

inline bool jointly_valid(const DepthMap& a, const DepthMap& b, const OrderedPair& p) {
  return a.valid_at(p.ri, p.ci) && a.valid_at(p.rj, p.cj) && b.valid_at(p.ri, p.ci) &&
         b.valid_at(p.rj, p.cj);
}

inline PairCounts boundary_counts(const DepthMap& pred, const DepthMap& gt, double t, bool nms) {
  PairCounts out;
  for (const auto& p : all_ordered_pairs(pred.width(), pred.height())) {
    if (!jointly_valid(pred, gt, p)) continue;
    const bool cp = contour(pred, p, t, nms);
    const bool cg = contour(gt, p, t, nms);
    out.predicted += cp;
    out.reference += cg;
    out.matched += cp && cg;
  }
  return out;
}

/// Mask contours c_b(i, j) = b(i) and not b(j); prediction pairs must be
/// valid in the prediction. Only the prediction is suppressed.
inline PairCounts mask_counts(const DepthMap& pred, const BinaryMask& mask, double t, bool nms) {
  PairCounts out;
  for (const auto& p : all_ordered_pairs(pred.width(), pred.height())) {
    if (!pred.valid_at(p.ri, p.ci) || !pred.valid_at(p.rj, p.cj)) continue;
    const bool cp = contour(pred, p, t, nms);
    const bool cb = mask.at(p.ri, p.ci) && !mask.at(p.rj, p.cj);
    out.predicted += cp;
    out.reference += cb;
    out.matched += cp && cb;
  }
  return out;
}

/// Trimmed MAE by sorting errors and dropping the largest ceil(f N) of them
/// (equal errors: the later one goes first). Survivors are summed in their
/// original order.
inline double trimmed_mae(const std::vector<double>& errors, double trim) {
  std::vector<std::size_t> order(errors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return errors[a] != errors[b] ? errors[a] > errors[b] : a > b;
  });
  const auto drop = static_cast<std::size_t>(std::ceil(trim * static_cast<double>(errors.size()) - 1e-9));
  std::vector<bool> dropped(errors.size(), false);
  for (std::size_t k = 0; k < drop; ++k) dropped[order[k]] = true;
  double sum = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!dropped[i]) sum += errors[i];
  }
  return sum / static_cast<double>(errors.size() - drop);
}

}  // namespace depthbench::oracle
