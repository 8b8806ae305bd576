#pragma once

// Random and synthetic rasters shared by unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench::testing {

using Rng = std::mt19937_64;

/// Small depth map mixing a coarse palette (so ratio ties and threshold
/// hits occur) with continuous values; `invalid_rate` of pixels invalid.
inline DepthMap random_depth(Rng& rng, int w, int h, double invalid_rate = 0.1) {
  static const double palette[] = {1.0, 1.05, 1.1, 1.15, 1.2, 1.25, 1.3, 1.5, 2.0, 3.0};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 9);
  DepthMap d(w, h, 1.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      d.at(r, c) = u(rng) < 0.6 ? palette[pick(rng)] : 0.5 + 3.0 * u(rng);
      d.set_valid(r, c, u(rng) >= invalid_rate);
    }
  }
  return d;
}

inline DepthMap smooth_random_depth(Rng& rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(rng), b = u(rng), p = 6.28 * u(rng);
  DepthMap d(w, h, 1.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      d.at(r, c) = 2.0 + std::sin(a * c + p) + 0.5 * std::cos(b * r) + 0.2 * u(rng);
    }
  }
  return d;
}

inline BinaryMask random_mask(Rng& rng, int w, int h) {
  std::bernoulli_distribution fg(0.4);
  BinaryMask m(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) m.set(r, c, fg(rng));
  }
  return m;
}

/// Slanted background plane with occluding discs at sub-pixel positions:
/// every depth discontinuity is a one-pixel step.
inline DepthMap step_edge_map(Rng& rng, int side, int discs = 12) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double gx = 2.0 * (u(rng) - 0.5) / side;
  const double gy = 2.0 * (u(rng) - 0.5) / side;
  struct Disc {
    double x, y, radius, depth;
  };
  std::vector<Disc> ds;
  for (int i = 0; i < discs; ++i) {
    ds.push_back({side * (0.1 + 0.8 * u(rng)), side * (0.1 + 0.8 * u(rng)), side * (0.03 + 0.12 * u(rng)),
                  1.0 + 2.0 * u(rng)});
  }
  DepthMap d(side, side, 1.0);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      double z = 8.0 + 2.0 * (gx * c + gy * r);
      for (const auto& disc : ds) {
        const double dx = c + 0.5 - disc.x, dy = r + 0.5 - disc.y;
        if (dx * dx + dy * dy < disc.radius * disc.radius) z = std::min(z, disc.depth);
      }
      d.at(r, c) = z;
    }
  }
  return d;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("depthbench_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace depthbench::testing
