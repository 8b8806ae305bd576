#include "depthbench/patchwork.hpp"

#include <cmath>

#include "depthbench/pyramid.hpp"

namespace depthbench {

int PatchPlan::total_patches() const {
  int n = 0;
  for (const auto& s : scales) n += s.grid * s.grid;
  return n;
}

PatchPlan plan_patches(int input_side) {
  if (input_side != 1536) {
    throw UnsupportedConfigError("patch plan is defined for 1536x1536 inputs only, got " +
                                 std::to_string(input_side));
  }
  PatchPlan plan;
  plan.scales = {{1536, 5, 288}, {768, 3, 192}, {384, 1, 0}};
  for (const auto& s : plan.scales) {
    if ((s.grid - 1) * s.stride + plan.patch != s.image_side) {
      throw UnsupportedConfigError("inconsistent patch tiling");
    }
  }
  return plan;
}

std::vector<Patch> split(const Field& image, const PatchPlan& plan) {
  if (image.width() != plan.base || image.height() != plan.base) {
    throw StructuralError("split expects a " + shape_string(plan.base, plan.base) + " image, got " +
                          shape_string(image.width(), image.height()));
  }
  std::vector<Field> pyramid{image};
  for (std::size_t k = 1; k < plan.scales.size(); ++k) {
    Field next = downsample2(pyramid.back());
    while (next.width() > plan.scales[k].image_side) next = downsample2(next);
    pyramid.push_back(std::move(next));
  }

  std::vector<Patch> patches;
  patches.reserve(static_cast<std::size_t>(plan.total_patches()));
  for (std::size_t k = 0; k < plan.scales.size(); ++k) {
    const auto& s = plan.scales[k];
    for (int gr = 0; gr < s.grid; ++gr) {
      for (int gc = 0; gc < s.grid; ++gc) {
        patches.push_back({static_cast<int>(k), gr, gc, gr * s.stride, gc * s.stride,
                           Field(plan.patch, plan.patch, 0.0, false)});
      }
    }
  }

  const auto n = static_cast<std::ptrdiff_t>(patches.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& p = patches[static_cast<std::size_t>(i)];
    const Field& src = pyramid[static_cast<std::size_t>(p.scale)];
    for (int r = 0; r < plan.patch; ++r) {
      for (int c = 0; c < plan.patch; ++c) {
        p.pixels.at(r, c) = src.at(p.row_offset + r, p.col_offset + c);
        p.pixels.set_valid(r, c, src.valid_at(p.row_offset + r, p.col_offset + c));
      }
    }
  }
  return patches;
}

int merged_side(int n, int stride_px, int feature_side, int embed) {
  if (n < 1) throw DomainError("merge needs at least one patch per axis");
  if (n > 1 && (stride_px <= 0 || stride_px % embed != 0)) {
    throw UnsupportedConfigError("patch stride " + std::to_string(stride_px) +
                                 " is not a positive multiple of " + std::to_string(embed));
  }
  return n == 1 ? feature_side : (n - 1) * (stride_px / embed) + feature_side;
}

std::vector<VoronoiCell> voronoi_cells(int n, int stride_px, int feature_side, int embed) {
  const int side = merged_side(n, stride_px, feature_side, embed);
  const int sf = n == 1 ? 0 : stride_px / embed;
  // Doubled coordinates keep half-integer centers exact: element x has
  // center 2x+1, patch i has center feature_side + 2*i*sf.
  auto owner = [&](int x) {
    int best = 0;
    long best_d = std::labs(2L * x + 1 - feature_side);
    for (int i = 1; i < n; ++i) {
      const long d = std::labs(2L * x + 1 - (feature_side + 2L * i * sf));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };
  std::vector<VoronoiCell> cells(static_cast<std::size_t>(n), VoronoiCell{0, 0, 0});
  int x = 0;
  for (int i = 0; i < n; ++i) {
    const int start = x;
    while (x < side && owner(x) == i) ++x;
    cells[static_cast<std::size_t>(i)] = {start, start - i * sf, x - start};
  }
  if (x != side) throw UnsupportedConfigError("Voronoi cells do not tile the merged map");
  for (const auto& c : cells) {
    if (c.local_start < 0 || c.local_start + c.length > feature_side) {
      throw UnsupportedConfigError("Voronoi cell extends beyond its feature patch");
    }
  }
  return cells;
}

Field merge_counted(const std::vector<Field>& features, int n, int stride_px,
                    std::vector<int>& write_count, int feature_side, int embed) {
  if (features.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw StructuralError("merge expects " + std::to_string(n * n) + " feature grids, got " +
                          std::to_string(features.size()));
  }
  for (const auto& f : features) {
    if (f.width() != feature_side || f.height() != feature_side) {
      throw StructuralError("feature grid " + shape_string(f.width(), f.height()) + ", expected " +
                            shape_string(feature_side, feature_side));
    }
  }
  const auto cells = voronoi_cells(n, stride_px, feature_side, embed);
  const int side = merged_side(n, stride_px, feature_side, embed);
  Field out(side, side, 0.0, false);
  write_count.assign(static_cast<std::size_t>(side) * side, 0);

  // Cells are disjoint, so patches write disjoint regions.
#pragma omp parallel for collapse(2) schedule(static)
  for (int py = 0; py < n; ++py) {
    for (int px = 0; px < n; ++px) {
      const auto& cy = cells[static_cast<std::size_t>(py)];
      const auto& cx = cells[static_cast<std::size_t>(px)];
      const Field& f = features[static_cast<std::size_t>(py) * n + px];
      for (int y = 0; y < cy.length; ++y) {
        for (int x = 0; x < cx.length; ++x) {
          const int oy = cy.map_start + y;
          const int ox = cx.map_start + x;
          out.at(oy, ox) = f.at(cy.local_start + y, cx.local_start + x);
          out.set_valid(oy, ox, f.valid_at(cy.local_start + y, cx.local_start + x));
          ++write_count[static_cast<std::size_t>(oy) * side + ox];
        }
      }
    }
  }
  return out;
}

Field merge(const std::vector<Field>& features, int n, int stride_px, int feature_side, int embed) {
  std::vector<int> counts;
  return merge_counted(features, n, stride_px, counts, feature_side, embed);
}

}  // namespace depthbench
