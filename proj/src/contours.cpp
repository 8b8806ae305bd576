#include "depthbench/contours.hpp"

#include <algorithm>

namespace depthbench {
namespace {

std::int8_t depth_direction(double first, double second, double threshold) {
  if (second / first > threshold) return kFarSecond;
  if (first / second > threshold) return kFarFirst;
  return 0;
}

double pair_ratio(double first, double second, std::int8_t dir) {
  return dir == kFarSecond ? second / first : first / second;
}

// Keeps the maximum-ratio pair in each same-direction run of one line.
// `at(k)` yields (direction&, first depth, second depth) for pair k.
template <typename Access>
void suppress_line(int length, Access at) {
  int k = 0;
  while (k < length) {
    const std::int8_t dir = at(k).dir;
    if (dir == 0) {
      ++k;
      continue;
    }
    int best = k;
    double best_ratio = at(k).ratio();
    int end = k + 1;
    while (end < length && at(end).dir == dir) {
      const double r = at(end).ratio();
      if (r > best_ratio) {
        best_ratio = r;
        best = end;
      }
      ++end;
    }
    for (int j = k; j < end; ++j) {
      if (j != best) at(j).dir = 0;
    }
    k = end;
  }
}

struct PairRef {
  std::int8_t& dir;
  double first;
  double second;
  double ratio() const { return pair_ratio(first, second, dir); }
};

}  // namespace

ContourField::ContourField(int width, int height) : width(width), height(height) {
  const auto h_pairs = static_cast<std::size_t>(height) * static_cast<std::size_t>(std::max(width - 1, 0));
  const auto v_pairs = static_cast<std::size_t>(std::max(height - 1, 0)) * static_cast<std::size_t>(width);
  horizontal.assign(h_pairs, 0);
  horizontal_valid.assign(h_pairs, 0);
  vertical.assign(v_pairs, 0);
  vertical_valid.assign(v_pairs, 0);
}

std::size_t ContourField::fired_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < horizontal.size(); ++i) n += (horizontal[i] != 0 && horizontal_valid[i]);
  for (std::size_t i = 0; i < vertical.size(); ++i) n += (vertical[i] != 0 && vertical_valid[i]);
  return n;
}

ContourField contours_from_depth(const DepthMap& d, double t_percent) {
  if (!(t_percent > 0.0)) throw DomainError("contour threshold must be > 0");
  const int w = d.width();
  const int h = d.height();
  const double thr = ratio_threshold(t_percent);
  ContourField f(w, h);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c + 1 < w; ++c) {
      const auto k = static_cast<std::size_t>(r) * (w - 1) + c;
      if (!d.valid_at(r, c) || !d.valid_at(r, c + 1)) continue;
      f.horizontal_valid[k] = 1;
      f.horizontal[k] = depth_direction(d.at(r, c), d.at(r, c + 1), thr);
    }
    if (r + 1 < h) {
      for (int c = 0; c < w; ++c) {
        const auto k = static_cast<std::size_t>(r) * w + c;
        if (!d.valid_at(r, c) || !d.valid_at(r + 1, c)) continue;
        f.vertical_valid[k] = 1;
        f.vertical[k] = depth_direction(d.at(r, c), d.at(r + 1, c), thr);
      }
    }
  }
  return f;
}

ContourField contours_from_mask(const BinaryMask& b) {
  const int w = b.width();
  const int h = b.height();
  ContourField f(w, h);
  auto dir = [](bool first, bool second) -> std::int8_t {
    if (first == second) return 0;
    return first ? kFarSecond : kFarFirst;  // background is the far side
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c + 1 < w; ++c) {
      const auto k = static_cast<std::size_t>(r) * (w - 1) + c;
      f.horizontal_valid[k] = 1;
      f.horizontal[k] = dir(b.at(r, c), b.at(r, c + 1));
    }
    if (r + 1 < h) {
      for (int c = 0; c < w; ++c) {
        const auto k = static_cast<std::size_t>(r) * w + c;
        f.vertical_valid[k] = 1;
        f.vertical[k] = dir(b.at(r, c), b.at(r + 1, c));
      }
    }
  }
  return f;
}

ContourField suppress_non_maximum(const DepthMap& d, const ContourField& field) {
  if (field.width != d.width() || field.height != d.height()) {
    throw StructuralError("suppress_non_maximum: contour field " +
                          shape_string(field.width, field.height) + " vs depth " +
                          shape_string(d.width(), d.height()));
  }
  ContourField out = field;
  const int w = d.width();
  const int h = d.height();
  for (int r = 0; r < h; ++r) {
    suppress_line(w - 1, [&](int c) {
      return PairRef{out.horizontal[static_cast<std::size_t>(r) * (w - 1) + c], d.at(r, c),
                     d.at(r, c + 1)};
    });
  }
  for (int c = 0; c < w; ++c) {
    suppress_line(h - 1, [&](int r) {
      return PairRef{out.vertical[static_cast<std::size_t>(r) * w + c], d.at(r, c),
                     d.at(r + 1, c)};
    });
  }
  return out;
}

}  // namespace depthbench
