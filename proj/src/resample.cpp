#include "depthbench/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace depthbench {
namespace {

struct Tap {
  int i0, i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<Tap> axis_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int o = 0; o < dst; ++o) {
    const double pos = std::clamp((o + 0.5) * scale - 0.5, 0.0, static_cast<double>(src - 1));
    const int i0 = static_cast<int>(std::floor(pos));
    const int i1 = std::min(i0 + 1, src - 1);
    taps[static_cast<std::size_t>(o)] = {i0, i1, pos - i0};
  }
  return taps;
}

}  // namespace

Field resize_bilinear(const Field& x, int width, int height) {
  if (width < 1 || height < 1) throw DomainError("resize target must be at least 1x1");
  if (x.empty()) throw DomainError("cannot resize an empty raster");
  if (width == x.width() && height == x.height()) return x;
  const auto tx = axis_taps(x.width(), width);
  const auto ty = axis_taps(x.height(), height);
  Field out(width, height, 0.0, false);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    const auto& a = ty[static_cast<std::size_t>(r)];
    for (int c = 0; c < width; ++c) {
      const auto& b = tx[static_cast<std::size_t>(c)];
      const int rows[2] = {a.i0, a.i1};
      const int cols[2] = {b.i0, b.i1};
      const double wr[2] = {1.0 - a.w1, a.w1};
      const double wc[2] = {1.0 - b.w1, b.w1};
      double acc = 0.0;
      double wsum = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const double wgt = wr[i] * wc[j];
          if (wgt == 0.0 || !x.valid_at(rows[i], cols[j])) continue;
          acc += wgt * x.at(rows[i], cols[j]);
          wsum += wgt;
        }
      }
      if (wsum > 0.0) {
        out.at(r, c) = acc / wsum;
        out.set_valid(r, c, true);
      }
    }
  }
  return out;
}

}  // namespace depthbench
