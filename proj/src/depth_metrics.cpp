#include "depthbench/depth_metrics.hpp"

#include <array>
#include <cmath>

namespace depthbench {
namespace {

void check_pair(const DepthMap& pred, const DepthMap& gt, const char* what) {
  require_same_shape(pred, gt, what);
  pred.require_positive(what);
  gt.require_positive(what);
}

constexpr std::array<double, 3> kDeltaLimits{1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};

struct Sums {
  std::int64_t n = 0;
  std::array<std::int64_t, 3> inliers{};
  double abs_rel = 0, log10 = 0, dlog = 0, dlog2 = 0;

  void add(double p, double g) {
    ++n;
    const double ratio = std::max(p / g, g / p);
    for (int k = 0; k < 3; ++k) inliers[static_cast<std::size_t>(k)] += ratio < kDeltaLimits[static_cast<std::size_t>(k)];
    abs_rel += std::abs(p - g) / g;
    log10 += std::abs(std::log10(p) - std::log10(g));
    const double d = std::log(p) - std::log(g);
    dlog += d;
    dlog2 += d * d;
  }

  void merge(const Sums& o) {
    n += o.n;
    for (std::size_t k = 0; k < 3; ++k) inliers[k] += o.inliers[k];
    abs_rel += o.abs_rel;
    log10 += o.log10;
    dlog += o.dlog;
    dlog2 += o.dlog2;
  }
};

DepthMetricReport finish(const Sums& s) {
  if (s.n == 0) throw EmptyDomainError("depth metrics: no jointly valid pixels");
  const double n = static_cast<double>(s.n);
  DepthMetricReport r;
  r.delta1 = 100.0 * static_cast<double>(s.inliers[0]) / n;
  r.delta2 = 100.0 * static_cast<double>(s.inliers[1]) / n;
  r.delta3 = 100.0 * static_cast<double>(s.inliers[2]) / n;
  r.abs_rel = s.abs_rel / n;
  r.log10 = s.log10 / n;
  const double mean = s.dlog / n;
  r.si_log = 100.0 * std::sqrt(std::max(0.0, s.dlog2 / n - mean * mean));
  return r;
}

}  // namespace

double delta_k(const DepthMap& pred, const DepthMap& gt, int k) {
  if (k < 1 || k > 3) throw DomainError("delta_k requires k in {1, 2, 3}");
  check_pair(pred, gt, "delta_k");
  const double limit = kDeltaLimits[static_cast<std::size_t>(k - 1)];
  std::int64_t n = 0, in = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred.valid()[i] || !gt.valid()[i]) continue;
    const double p = pred.values()[i];
    const double g = gt.values()[i];
    ++n;
    in += std::max(p / g, g / p) < limit;
  }
  if (n == 0) throw EmptyDomainError("delta_k: no jointly valid pixels");
  return 100.0 * static_cast<double>(in) / static_cast<double>(n);
}

double abs_rel(const DepthMap& pred, const DepthMap& gt) { return depth_metrics(pred, gt).abs_rel; }

double log10_err(const DepthMap& pred, const DepthMap& gt) { return depth_metrics(pred, gt).log10; }

double si_log(const DepthMap& pred, const DepthMap& gt) {
  check_pair(pred, gt, "si_log");
  // Two passes so a constant log offset yields exactly zero variance.
  double sum = 0.0;
  std::int64_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred.valid()[i] || !gt.valid()[i]) continue;
    sum += std::log(pred.values()[i]) - std::log(gt.values()[i]);
    ++n;
  }
  if (n == 0) throw EmptyDomainError("si_log: no jointly valid pixels");
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred.valid()[i] || !gt.valid()[i]) continue;
    const double d = std::log(pred.values()[i]) - std::log(gt.values()[i]) - mean;
    var += d * d;
  }
  return 100.0 * std::sqrt(var / static_cast<double>(n));
}

DepthMetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  check_pair(pred, gt, "depth_metrics");
  const int h = pred.height();
  const int w = pred.width();
  std::vector<Sums> rows(static_cast<std::size_t>(h));
  const auto pv = pred.values();
  const auto gv = gt.values();
  const auto pm = pred.valid();
  const auto gm = gt.valid();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    Sums& s = rows[static_cast<std::size_t>(r)];
    const auto base = static_cast<std::size_t>(r) * static_cast<std::size_t>(w);
    for (int c = 0; c < w; ++c) {
      const auto i = base + static_cast<std::size_t>(c);
      if (pm[i] && gm[i]) s.add(pv[i], gv[i]);
    }
  }
  Sums total;
  for (const auto& s : rows) total.merge(s);
  auto report = finish(total);
  report.si_log = si_log(pred, gt);
  return report;
}

std::vector<double> focal_deltas(std::span<const FocalPair> pairs,
                                 std::span<const double> thresholds) {
  if (pairs.empty()) throw EmptyDomainError("focal_deltas: no pairs");
  std::vector<double> out;
  for (double q : thresholds) {
    std::size_t hits = 0;
    for (const auto& p : pairs) {
      if (!(p.ground_truth_mm > 0.0)) throw DomainError("focal_deltas: ground truth must be > 0");
      hits += std::abs(p.predicted_mm - p.ground_truth_mm) / p.ground_truth_mm < q;
    }
    out.push_back(100.0 * static_cast<double>(hits) / static_cast<double>(pairs.size()));
  }
  return out;
}

namespace reference {

DepthMetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  check_pair(pred, gt, "depth_metrics");
  Sums s;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.valid()[i] && gt.valid()[i]) s.add(pred.values()[i], gt.values()[i]);
  }
  auto report = finish(s);
  report.si_log = si_log(pred, gt);
  return report;
}

}  // namespace reference
}  // namespace depthbench
