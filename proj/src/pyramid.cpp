#include "depthbench/pyramid.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace depthbench {
namespace {

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

Field downsample2(const Field& x) {
  const int w = x.width() / 2;
  const int h = x.height() / 2;
  Field out(w, h, 0.0, false);
  const auto src = x.values();
  const auto src_valid = x.valid();
  auto dst = out.values();
  auto dst_valid = out.valid();
  const auto sw = static_cast<std::size_t>(x.width());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const std::size_t top = static_cast<std::size_t>(2 * r) * sw;
    const std::size_t bottom = top + sw;
    for (int c = 0; c < w; ++c) {
      const std::size_t i00 = top + 2 * c;
      const std::size_t i10 = bottom + 2 * c;
      const std::array<std::size_t, 4> taps{i00, i00 + 1, i10, i10 + 1};
      double sum = 0.0;
      int n = 0;
      for (auto t : taps) {
        if (src_valid[t]) {
          sum += src[t];
          ++n;
        }
      }
      const auto o = static_cast<std::size_t>(r) * w + c;
      if (n > 0) {
        dst[o] = sum / n;
        dst_valid[o] = 1;
      }
    }
  }
  return out;
}

std::vector<Field> build_pyramid(const Field& x, const PyramidSpec& spec) {
  if (spec.levels < 1) throw DomainError("pyramid needs at least one level");
  const long min_side = 1L << (spec.levels - 1);
  if (x.width() < min_side || x.height() < min_side) {
    throw DomainError("raster " + shape_string(x.width(), x.height()) + " too small for " +
                      std::to_string(spec.levels) + " pyramid levels");
  }
  std::vector<Field> levels;
  levels.reserve(static_cast<std::size_t>(spec.levels));
  levels.push_back(x);
  for (int j = 1; j < spec.levels; ++j) levels.push_back(downsample2(levels.back()));
  return levels;
}

GradientField scharr(const Field& x) {
  const int w = x.width();
  const int h = x.height();
  GradientField g{Field(w, h, 0.0, false), Field(w, h, 0.0, false)};
  const auto src = x.values();
  const auto valid = x.valid();
  auto gx = g.gx.values();
  auto gy = g.gy.values();
  auto gx_valid = g.gx.valid();
  auto gy_valid = g.gy.valid();
  const auto sw = static_cast<std::size_t>(w);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const std::size_t up = static_cast<std::size_t>(clamp_index(r - 1, h)) * sw;
    const std::size_t mid = static_cast<std::size_t>(r) * sw;
    const std::size_t down = static_cast<std::size_t>(clamp_index(r + 1, h)) * sw;
    for (int c = 0; c < w; ++c) {
      const std::size_t cl = static_cast<std::size_t>(clamp_index(c - 1, w));
      const std::size_t cc = static_cast<std::size_t>(c);
      const std::size_t cr = static_cast<std::size_t>(clamp_index(c + 1, w));
      const bool ok = valid[up + cl] && valid[up + cc] && valid[up + cr] && valid[mid + cl] &&
                      valid[mid + cc] && valid[mid + cr] && valid[down + cl] &&
                      valid[down + cc] && valid[down + cr];
      if (!ok) continue;
      const double dx = 3.0 * (src[up + cr] - src[up + cl]) +
                        10.0 * (src[mid + cr] - src[mid + cl]) +
                        3.0 * (src[down + cr] - src[down + cl]);
      const double dy = 3.0 * (src[down + cl] - src[up + cl]) +
                        10.0 * (src[down + cc] - src[up + cc]) +
                        3.0 * (src[down + cr] - src[up + cr]);
      gx[mid + cc] = dx / 32.0;
      gy[mid + cc] = dy / 32.0;
      gx_valid[mid + cc] = 1;
      gy_valid[mid + cc] = 1;
    }
  }
  return g;
}

Field laplace(const Field& x) {
  const int w = x.width();
  const int h = x.height();
  Field out(w, h, 0.0, false);
  const auto src = x.values();
  const auto valid = x.valid();
  auto dst = out.values();
  auto dst_valid = out.valid();
  const auto sw = static_cast<std::size_t>(w);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const std::size_t up = static_cast<std::size_t>(clamp_index(r - 1, h)) * sw;
    const std::size_t mid = static_cast<std::size_t>(r) * sw;
    const std::size_t down = static_cast<std::size_t>(clamp_index(r + 1, h)) * sw;
    for (int c = 0; c < w; ++c) {
      const std::size_t cl = static_cast<std::size_t>(clamp_index(c - 1, w));
      const std::size_t cc = static_cast<std::size_t>(c);
      const std::size_t cr = static_cast<std::size_t>(clamp_index(c + 1, w));
      if (!(valid[up + cc] && valid[mid + cl] && valid[mid + cc] && valid[mid + cr] &&
            valid[down + cc])) {
        continue;
      }
      dst[mid + cc] = (src[up + cc] + src[down + cc]) + (src[mid + cl] + src[mid + cr]) -
                      4.0 * src[mid + cc];
      dst_valid[mid + cc] = 1;
    }
  }
  return out;
}

namespace reference {
namespace {

// Generic 3x3 correlation with edge replication. Taps with weight 0 still
// participate in the validity test when `all_taps` is set.
Field correlate3x3(const Field& x, const std::array<double, 9>& k, double norm, bool all_taps) {
  Field out(x.width(), x.height(), 0.0, false);
  for (int r = 0; r < x.height(); ++r) {
    for (int c = 0; c < x.width(); ++c) {
      double acc = 0.0;
      bool ok = true;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const double weight = k[static_cast<std::size_t>((dr + 1) * 3 + (dc + 1))];
          if (weight == 0.0 && !all_taps) continue;
          const int rr = clamp_index(r + dr, x.height());
          const int cc = clamp_index(c + dc, x.width());
          ok = ok && x.valid_at(rr, cc);
          acc += weight * x.at(rr, cc);
        }
      }
      if (ok) {
        out.at(r, c) = acc / norm;
        out.set_valid(r, c, true);
      }
    }
  }
  return out;
}

}  // namespace

Field downsample2(const Field& x) {
  Field out(x.width() / 2, x.height() / 2, 0.0, false);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      double sum = 0.0;
      int n = 0;
      for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc) {
          if (x.valid_at(2 * r + dr, 2 * c + dc)) {
            sum += x.at(2 * r + dr, 2 * c + dc);
            ++n;
          }
        }
      }
      if (n > 0) {
        out.at(r, c) = sum / n;
        out.set_valid(r, c, true);
      }
    }
  }
  return out;
}

GradientField scharr(const Field& x) {
  static constexpr std::array<double, 9> kx{-3, 0, 3, -10, 0, 10, -3, 0, 3};
  static constexpr std::array<double, 9> ky{-3, -10, -3, 0, 0, 0, 3, 10, 3};
  return {correlate3x3(x, kx, 32.0, true), correlate3x3(x, ky, 32.0, true)};
}

Field laplace(const Field& x) {
  static constexpr std::array<double, 9> k{0, 1, 0, 1, -4, 1, 0, 1, 0};
  return correlate3x3(x, k, 1.0, false);
}

}  // namespace reference
}  // namespace depthbench
