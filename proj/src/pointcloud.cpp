#include "depthbench/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace depthbench {
namespace {

double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Uniform hash grid over one cloud; exact nearest-neighbor distance by
// expanding Chebyshev shells of cells.
class PointGrid {
 public:
  PointGrid(const std::vector<Point3>& points, double cell) : points_(points), cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto k = key(points[i]);
      cells_[k].push_back(static_cast<std::uint32_t>(i));
      if (i == 0) {
        lo_ = hi_ = k;
      } else {
        lo_ = {std::min(lo_.x, k.x), std::min(lo_.y, k.y), std::min(lo_.z, k.z)};
        hi_ = {std::max(hi_.x, k.x), std::max(hi_.y, k.y), std::max(hi_.z, k.z)};
      }
    }
  }

  double nearest(const Point3& q) const {
    const auto c = key(q);
    const std::int64_t reach =
        std::max({std::abs(c.x - lo_.x), std::abs(c.x - hi_.x), std::abs(c.y - lo_.y),
                  std::abs(c.y - hi_.y), std::abs(c.z - lo_.z), std::abs(c.z - hi_.z)});
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t r = 0; r <= reach; ++r) {
      const double shell_cells = 6.0 * static_cast<double>(2 * r + 1) * static_cast<double>(2 * r + 1);
      if (shell_cells > static_cast<double>(points_.size())) return brute(q, best);
      visit_shell(c, r, q, best);
      if (best <= static_cast<double>(r) * cell_) break;
    }
    return best;
  }

 private:
  CellKey key(const Point3& p) const {
    return {static_cast<std::int64_t>(std::floor(p[0] / cell_)),
            static_cast<std::int64_t>(std::floor(p[1] / cell_)),
            static_cast<std::int64_t>(std::floor(p[2] / cell_))};
  }

  double brute(const Point3& q, double best) const {
    for (const auto& p : points_) best = std::min(best, distance(q, p));
    return best;
  }

  void visit_cell(const CellKey& k, const Point3& q, double& best) const {
    const auto it = cells_.find(k);
    if (it == cells_.end()) return;
    for (auto i : it->second) best = std::min(best, distance(q, points_[i]));
  }

  void visit_shell(const CellKey& c, std::int64_t r, const Point3& q, double& best) const {
    const auto x0 = std::max(c.x - r, lo_.x), x1 = std::min(c.x + r, hi_.x);
    const auto y0 = std::max(c.y - r, lo_.y), y1 = std::min(c.y + r, hi_.y);
    for (auto x = x0; x <= x1; ++x) {
      for (auto y = y0; y <= y1; ++y) {
        const bool on_face = std::abs(x - c.x) == r || std::abs(y - c.y) == r;
        if (on_face) {
          const auto z0 = std::max(c.z - r, lo_.z), z1 = std::min(c.z + r, hi_.z);
          for (auto z = z0; z <= z1; ++z) visit_cell({x, y, z}, q, best);
        } else {
          if (c.z - r >= lo_.z && c.z - r <= hi_.z) visit_cell({x, y, c.z - r}, q, best);
          if (r > 0 && c.z + r >= lo_.z && c.z + r <= hi_.z) visit_cell({x, y, c.z + r}, q, best);
        }
      }
    }
  }

  const std::vector<Point3>& points_;
  double cell_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
  CellKey lo_{}, hi_{};
};

void check_inputs(const PointCloud& a, const PointCloud& b, double tau) {
  if (a.points.empty() || b.points.empty()) throw EmptyDomainError("pc_metrics: empty point cloud");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("pc_metrics: tau must be > 0");
  if (a.points.size() > std::numeric_limits<std::uint32_t>::max() ||
      b.points.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw StructuralError("pc_metrics: point cloud too large");
  }
}

PointCloudMetrics combine(const std::vector<double>& a_to_b, const std::vector<double>& b_to_a,
                          double tau) {
  double sum_a = 0.0, sum_b = 0.0;
  std::size_t hit_a = 0, hit_b = 0;
  for (double d : a_to_b) {
    sum_a += d;
    hit_a += d < tau;
  }
  for (double d : b_to_a) {
    sum_b += d;
    hit_b += d < tau;
  }
  const double na = static_cast<double>(a_to_b.size());
  const double nb = static_cast<double>(b_to_a.size());
  PointCloudMetrics m;
  m.chamfer = sum_a / na + sum_b / nb;
  m.precision = static_cast<double>(hit_a) / na;
  m.recall = static_cast<double>(hit_b) / nb;
  if (m.precision + m.recall > 0.0) {
    m.f_score = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  const double tp = (m.precision * na + m.recall * nb) / 2.0;
  m.iou = tp / (na + nb - tp);
  return m;
}

}  // namespace

PointCloud unproject(const DepthMap& depth, const CameraModel& cam) {
  depth.require_positive("unproject");
  PointCloud pc;
  pc.points.reserve(depth.valid_count());
  const double cx = depth.width() / 2.0;
  const double cy = depth.height() / 2.0;
  for (int r = 0; r < depth.height(); ++r) {
    for (int c = 0; c < depth.width(); ++c) {
      if (!depth.valid_at(r, c)) continue;
      const double d = depth.at(r, c);
      pc.points.push_back({(c - cx) * d / cam.focal_px, (r - cy) * d / cam.focal_px, d});
    }
  }
  return pc;
}

PointCloudMetrics pc_metrics(const PointCloud& a, const PointCloud& b, double tau) {
  check_inputs(a, b, tau);
  const PointGrid grid_a(a.points, tau);
  const PointGrid grid_b(b.points, tau);
  std::vector<double> a_to_b(a.points.size()), b_to_a(b.points.size());
  const auto na = static_cast<std::ptrdiff_t>(a.points.size());
  const auto nb = static_cast<std::ptrdiff_t>(b.points.size());
#pragma omp parallel
  {
#pragma omp for schedule(dynamic, 256) nowait
    for (std::ptrdiff_t i = 0; i < na; ++i) a_to_b[i] = grid_b.nearest(a.points[i]);
#pragma omp for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < nb; ++i) b_to_a[i] = grid_a.nearest(b.points[i]);
  }
  return combine(a_to_b, b_to_a, tau);
}

namespace reference {

PointCloudMetrics pc_metrics(const PointCloud& a, const PointCloud& b, double tau) {
  check_inputs(a, b, tau);
  std::vector<double> a_to_b, b_to_a;
  for (const auto& p : a.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b.points) best = std::min(best, distance(p, q));
    a_to_b.push_back(best);
  }
  for (const auto& p : b.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : a.points) best = std::min(best, distance(p, q));
    b_to_a.push_back(best);
  }
  return combine(a_to_b, b_to_a, tau);
}

}  // namespace reference
}  // namespace depthbench
