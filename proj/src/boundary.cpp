#include "depthbench/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <omp.h>

namespace depthbench {

void ThresholdSchedule::validate() const {
  if (steps < 1) throw DomainError("threshold schedule needs at least one step");
  if (!(t_min > 0.0) || !(t_max >= t_min)) {
    throw DomainError("threshold schedule requires 0 < t_min <= t_max");
  }
  if (steps == 1 && t_min != t_max) {
    throw DomainError("a one-step schedule requires t_min == t_max");
  }
  if (steps > 250) throw DomainError("threshold schedule limited to 250 steps");
}

std::vector<double> ThresholdSchedule::thresholds() const {
  validate();
  std::vector<double> t(static_cast<std::size_t>(steps));
  if (steps == 1) {
    t[0] = t_min;
    return t;
  }
  const double step = (t_max - t_min) / (steps - 1);
  for (int k = 0; k < steps; ++k) t[static_cast<std::size_t>(k)] = t_min + k * step;
  t.back() = t_max;
  return t;
}

std::vector<double> ThresholdSchedule::weights() const {
  auto t = thresholds();
  const double total = std::accumulate(t.begin(), t.end(), 0.0);
  for (auto& x : t) x /= total;
  return t;
}

PrecisionRecall precision_recall(const PairCounts& c) {
  if (c.predicted == 0 && c.reference == 0) return {1.0, 1.0, 1.0};
  PrecisionRecall pr;
  if (c.predicted > 0) pr.precision = static_cast<double>(c.matched) / static_cast<double>(c.predicted);
  if (c.reference > 0) pr.recall = static_cast<double>(c.matched) / static_cast<double>(c.reference);
  if (pr.precision + pr.recall > 0.0) {
    pr.f1 = 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall);
  }
  return pr;
}

PairCounts count_matches(const ContourField& predicted, const ContourField& reference) {
  if (predicted.width != reference.width || predicted.height != reference.height) {
    throw StructuralError("contour fields differ in shape: " +
                          shape_string(predicted.width, predicted.height) + " vs " +
                          shape_string(reference.width, reference.height));
  }
  PairCounts out;
  auto tally = [&](const std::vector<std::int8_t>& p, const std::vector<std::uint8_t>& pv,
                   const std::vector<std::int8_t>& g, const std::vector<std::uint8_t>& gv) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!pv[k] || !gv[k]) continue;
      out.predicted += p[k] != 0;
      out.reference += g[k] != 0;
      out.matched += (p[k] != 0 && p[k] == g[k]);
    }
  };
  tally(predicted.horizontal, predicted.horizontal_valid, reference.horizontal,
        reference.horizontal_valid);
  tally(predicted.vertical, predicted.vertical_valid, reference.vertical, reference.vertical_valid);
  return out;
}

PrecisionRecall boundary_pr(const DepthMap& pred, const ContourField& gt_contours,
                            double t_percent, bool nms) {
  if (pred.width() != gt_contours.width || pred.height() != gt_contours.height) {
    throw StructuralError("boundary_pr: prediction " + shape_string(pred.width(), pred.height()) +
                          " vs contours " + shape_string(gt_contours.width, gt_contours.height));
  }
  auto field = contours_from_depth(pred, t_percent);
  if (nms) field = suppress_non_maximum(pred, field);
  return precision_recall(count_matches(field, gt_contours));
}

PrecisionRecall boundary_pr(const DepthMap& pred, const DepthMap& gt, double t_percent, bool nms) {
  require_same_shape(pred, gt, "boundary_pr");
  auto gt_field = contours_from_depth(gt, t_percent);
  if (nms) gt_field = suppress_non_maximum(gt, gt_field);
  return boundary_pr(pred, gt_field, t_percent, nms);
}

std::optional<double> boundary_recall_mask(const DepthMap& pred, const BinaryMask& mask,
                                           double t_percent, bool nms) {
  if (pred.width() != mask.width() || pred.height() != mask.height()) {
    throw StructuralError("boundary_recall_mask: prediction " +
                          shape_string(pred.width(), pred.height()) + " vs mask " +
                          shape_string(mask.width(), mask.height()));
  }
  auto field = contours_from_depth(pred, t_percent);
  if (nms) field = suppress_non_maximum(pred, field);
  const auto counts = count_matches(field, contours_from_mask(mask));
  if (counts.reference == 0) return std::nullopt;
  return static_cast<double>(counts.matched) / static_cast<double>(counts.reference);
}

namespace {

// sum(t * score) / sum(t): dividing once keeps a constant score exact.
class WeightedSum {
 public:
  explicit WeightedSum(const ThresholdSchedule& schedule) : t_(schedule.thresholds()) {
    for (double t : t_) denominator_ += t;
  }
  std::size_t size() const { return t_.size(); }
  double threshold(std::size_t k) const { return t_[k]; }
  double operator()(const std::vector<double>& scores) const {
    double num = 0.0;
    for (std::size_t k = 0; k < t_.size(); ++k) num += t_[k] * scores[k];
    return num / denominator_;
  }

 private:
  std::vector<double> t_;
  double denominator_ = 0.0;
};

}  // namespace

double weighted_boundary_score(std::span<const ThresholdScore> per_threshold,
                               const ThresholdSchedule& schedule) {
  const WeightedSum weighted(schedule);
  const auto t = schedule.thresholds();
  std::vector<double> scores;
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto it = std::find_if(per_threshold.begin(), per_threshold.end(), [&](const ThresholdScore& s) {
      return std::abs(s.t - t[k]) <= 1e-9 * std::max(1.0, std::abs(t[k]));
    });
    if (it == per_threshold.end()) {
      throw StructuralError("no score for threshold " + std::to_string(t[k]));
    }
    scores.push_back(it->score);
  }
  return weighted(scores);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint8_t kNever = 255;

// One 1-D line of neighbor pairs (a row of horizontal pairs or a column of
// vertical pairs) for one map.
struct LineSide {
  std::vector<std::uint8_t> valid;
  std::vector<std::uint8_t> level;  // number of thresholds the pair exceeds
  std::vector<std::int8_t> dir;
  std::vector<double> ratio;
  std::vector<std::uint8_t> from;   // first threshold index where the pair survives NMS

  void resize(std::size_t n) {
    valid.resize(n);
    level.resize(n);
    dir.resize(n);
    ratio.resize(n);
    from.resize(n);
  }
};

std::uint8_t level_of(double ratio, const std::vector<double>& thr) {
  if (!(ratio > thr.front())) return 0;
  return static_cast<std::uint8_t>(std::lower_bound(thr.begin(), thr.end(), ratio) - thr.begin());
}

void fill_depth_pair(LineSide& s, std::size_t k, bool ok, double first, double second,
                     const std::vector<double>& thr) {
  s.valid[k] = ok ? 1 : 0;
  s.level[k] = 0;
  s.dir[k] = 0;
  if (!ok) return;
  if (second > first) {
    const double r = second / first;
    s.level[k] = level_of(r, thr);
    s.dir[k] = s.level[k] ? kFarSecond : 0;
    s.ratio[k] = r;
  } else if (first > second) {
    const double r = first / second;
    s.level[k] = level_of(r, thr);
    s.dir[k] = s.level[k] ? kFarFirst : 0;
    s.ratio[k] = r;
  }
}

// For every fired pair, the smallest threshold index at which it is the
// maximum of its same-direction run. Runs only shrink as the threshold grows,
// so survival is an interval [from, level).
void compute_survival(LineSide& s, std::size_t n, std::vector<std::pair<std::size_t, std::uint8_t>>& stack) {
  std::size_t k = 0;
  while (k < n) {
    if (s.level[k] == 0) {
      s.from[k] = kNever;
      ++k;
      continue;
    }
    std::size_t end = k + 1;
    while (end < n && s.level[end] > 0 && s.dir[end] == s.dir[k]) ++end;

    // Left beaters: nearest earlier pair with ratio >= own (lower index wins ties).
    stack.clear();
    for (std::size_t p = k; p < end; ++p) {
      std::uint8_t m = kNever;
      while (!stack.empty() && s.ratio[stack.back().first] < s.ratio[p]) {
        m = std::min({m, stack.back().second, s.level[stack.back().first]});
        stack.pop_back();
      }
      s.from[p] = stack.empty() ? 0 : std::min(m, s.level[stack.back().first]);
      stack.emplace_back(p, m);
    }
    // Right beaters: nearest later pair with strictly larger ratio.
    stack.clear();
    for (std::size_t p = end; p-- > k;) {
      std::uint8_t m = kNever;
      while (!stack.empty() && s.ratio[stack.back().first] <= s.ratio[p]) {
        m = std::min({m, stack.back().second, s.level[stack.back().first]});
        stack.pop_back();
      }
      const std::uint8_t right = stack.empty() ? 0 : std::min(m, s.level[stack.back().first]);
      s.from[p] = std::max(s.from[p], right);
      stack.emplace_back(p, m);
    }
    k = end;
  }
}

void no_suppression(LineSide& s, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) s.from[k] = s.level[k] ? 0 : kNever;
}

struct DiffCounts {
  std::vector<std::int64_t> predicted, reference, matched;

  explicit DiffCounts(std::size_t steps)
      : predicted(steps + 1, 0), reference(steps + 1, 0), matched(steps + 1, 0) {}

  void add(const DiffCounts& o) {
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      predicted[i] += o.predicted[i];
      reference[i] += o.reference[i];
      matched[i] += o.matched[i];
    }
  }
};

void accumulate_line(const LineSide& p, const LineSide& g, std::size_t n, DiffCounts& d) {
  for (std::size_t k = 0; k < n; ++k) {
    if (!p.valid[k] || !g.valid[k]) continue;
    const bool p_on = p.level[k] > 0 && p.from[k] < p.level[k];
    const bool g_on = g.level[k] > 0 && g.from[k] < g.level[k];
    if (p_on) {
      ++d.predicted[p.from[k]];
      --d.predicted[p.level[k]];
    }
    if (g_on) {
      ++d.reference[g.from[k]];
      --d.reference[g.level[k]];
    }
    if (p_on && g_on && p.dir[k] == g.dir[k]) {
      const auto lo = std::max(p.from[k], g.from[k]);
      const auto hi = std::min(p.level[k], g.level[k]);
      if (lo < hi) {
        ++d.matched[lo];
        --d.matched[hi];
      }
    }
  }
}

std::vector<PairCounts> finish(const DiffCounts& d, std::size_t steps) {
  std::vector<PairCounts> out(steps);
  PairCounts run;
  for (std::size_t s = 0; s < steps; ++s) {
    run.predicted += d.predicted[s];
    run.reference += d.reference[s];
    run.matched += d.matched[s];
    out[s] = run;
  }
  return out;
}

// Walks all H row-lines and W column-lines. `fill_ref(side, line, is_row, len)`
// populates the reference side of a line.
template <typename FillRef>
std::vector<PairCounts> scan_lines(const DepthMap& pred, const std::vector<double>& thr,
                                   bool nms_pred, bool nms_ref, FillRef fill_ref) {
  const int w = pred.width();
  const int h = pred.height();
  const auto steps = thr.size();
  const auto values = pred.values();
  const auto valid = pred.valid();
  const auto sw = static_cast<std::size_t>(w);
  DiffCounts total(steps);
  const int lines = h + w;

#pragma omp parallel
  {
    DiffCounts local(steps);
    LineSide ps, gs;
    const auto longest = static_cast<std::size_t>(std::max(w, h));
    ps.resize(longest);
    gs.resize(longest);
    std::vector<std::pair<std::size_t, std::uint8_t>> stack;
    stack.reserve(longest);

#pragma omp for schedule(dynamic, 8)
    for (int line = 0; line < lines; ++line) {
      const bool is_row = line < h;
      const int idx = is_row ? line : line - h;
      const std::size_t n = static_cast<std::size_t>(is_row ? std::max(w - 1, 0) : std::max(h - 1, 0));
      if (n == 0) continue;
      if (is_row) {
        const std::size_t base = static_cast<std::size_t>(idx) * sw;
        for (std::size_t k = 0; k < n; ++k) {
          const auto a = base + k;
          fill_depth_pair(ps, k, valid[a] && valid[a + 1], values[a], values[a + 1], thr);
        }
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          const auto a = k * sw + static_cast<std::size_t>(idx);
          fill_depth_pair(ps, k, valid[a] && valid[a + sw], values[a], values[a + sw], thr);
        }
      }
      fill_ref(gs, idx, is_row, n);
      if (nms_pred) compute_survival(ps, n, stack); else no_suppression(ps, n);
      if (nms_ref) compute_survival(gs, n, stack); else no_suppression(gs, n);
      accumulate_line(ps, gs, n, local);
    }
#pragma omp critical(depthbench_boundary_merge)
    total.add(local);
  }
  return finish(total, steps);
}

std::vector<double> ratio_thresholds(const ThresholdSchedule& schedule) {
  auto t = schedule.thresholds();
  for (auto& x : t) x = ratio_threshold(x);
  return t;
}

}  // namespace

std::vector<PairCounts> boundary_counts(const DepthMap& pred, const DepthMap& gt,
                                        const ThresholdSchedule& schedule, bool nms) {
  require_same_shape(pred, gt, "boundary_counts");
  const auto thr = ratio_thresholds(schedule);
  const auto gvalues = gt.values();
  const auto gvalid = gt.valid();
  const auto sw = static_cast<std::size_t>(gt.width());
  return scan_lines(pred, thr, nms, nms, [&](LineSide& gs, int idx, bool is_row, std::size_t n) {
    if (is_row) {
      const std::size_t base = static_cast<std::size_t>(idx) * sw;
      for (std::size_t k = 0; k < n; ++k) {
        const auto a = base + k;
        fill_depth_pair(gs, k, gvalid[a] && gvalid[a + 1], gvalues[a], gvalues[a + 1], thr);
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        const auto a = k * sw + static_cast<std::size_t>(idx);
        fill_depth_pair(gs, k, gvalid[a] && gvalid[a + sw], gvalues[a], gvalues[a + sw], thr);
      }
    }
  });
}

std::vector<PairCounts> mask_counts(const DepthMap& pred, const BinaryMask& mask,
                                    const ThresholdSchedule& schedule, bool nms) {
  if (pred.width() != mask.width() || pred.height() != mask.height()) {
    throw StructuralError("mask_counts: prediction " + shape_string(pred.width(), pred.height()) +
                          " vs mask " + shape_string(mask.width(), mask.height()));
  }
  const auto thr = ratio_thresholds(schedule);
  const auto all = static_cast<std::uint8_t>(thr.size());
  const auto m = mask.values();
  const auto sw = static_cast<std::size_t>(mask.width());
  return scan_lines(pred, thr, nms, false, [&](LineSide& gs, int idx, bool is_row, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t a = is_row ? static_cast<std::size_t>(idx) * sw + k
                                   : k * sw + static_cast<std::size_t>(idx);
      const std::size_t b = is_row ? a + 1 : a + sw;
      gs.valid[k] = 1;
      if (m[a] != m[b]) {
        gs.level[k] = all;
        gs.dir[k] = m[a] ? kFarSecond : kFarFirst;
      } else {
        gs.level[k] = 0;
        gs.dir[k] = 0;
      }
    }
  });
}

BoundaryScore score_from_counts(std::span<const PairCounts> counts,
                                const ThresholdSchedule& schedule) {
  const WeightedSum weighted(schedule);
  if (counts.size() != weighted.size()) throw StructuralError("count vector does not match schedule");
  BoundaryScore out;
  std::vector<double> f1, precision, recall;
  for (const auto& c : counts) {
    const auto pr = precision_recall(c);
    out.per_threshold.push_back(pr);
    f1.push_back(pr.f1);
    precision.push_back(pr.precision);
    recall.push_back(pr.recall);
  }
  out.f1 = weighted(f1);
  out.precision = weighted(precision);
  out.recall = weighted(recall);
  return out;
}

BoundaryScore weighted_boundary_f1(const DepthMap& pred, const DepthMap& gt,
                                   const ThresholdSchedule& schedule, bool nms) {
  const auto counts = boundary_counts(pred, gt, schedule, nms);
  return score_from_counts(counts, schedule);
}

std::optional<double> mask_recall_from_counts(std::span<const PairCounts> counts,
                                              const ThresholdSchedule& schedule) {
  const WeightedSum weighted(schedule);
  if (counts.size() != weighted.size()) throw StructuralError("count vector does not match schedule");
  if (counts.empty() || counts.front().reference == 0) return std::nullopt;
  std::vector<double> recall;
  for (const auto& c : counts) {
    recall.push_back(static_cast<double>(c.matched) / static_cast<double>(c.reference));
  }
  return weighted(recall);
}

std::optional<double> weighted_mask_recall(const DepthMap& pred, const BinaryMask& mask,
                                           const ThresholdSchedule& schedule, bool nms) {
  const auto counts = mask_counts(pred, mask, schedule, nms);
  return mask_recall_from_counts(counts, schedule);
}

namespace reference {

std::vector<PairCounts> boundary_counts(const DepthMap& pred, const DepthMap& gt,
                                        const ThresholdSchedule& schedule, bool nms) {
  require_same_shape(pred, gt, "boundary_counts");
  std::vector<PairCounts> out;
  for (double t : schedule.thresholds()) {
    auto p = contours_from_depth(pred, t);
    auto g = contours_from_depth(gt, t);
    if (nms) {
      p = suppress_non_maximum(pred, p);
      g = suppress_non_maximum(gt, g);
    }
    out.push_back(count_matches(p, g));
  }
  return out;
}

std::vector<PairCounts> mask_counts(const DepthMap& pred, const BinaryMask& mask,
                                    const ThresholdSchedule& schedule, bool nms) {
  const auto g = contours_from_mask(mask);
  std::vector<PairCounts> out;
  for (double t : schedule.thresholds()) {
    auto p = contours_from_depth(pred, t);
    if (nms) p = suppress_non_maximum(pred, p);
    out.push_back(count_matches(p, g));
  }
  return out;
}

}  // namespace reference
}  // namespace depthbench
