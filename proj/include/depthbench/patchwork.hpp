#pragma once

// Fixed three-scale patch tiling of a 1536x1536 input and the Voronoi merge
// of per-patch 24x24 feature grids.

#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench {

struct ScaleLevel {
  int image_side;  // side of the (downsampled) image at this scale
  int grid;        // patches per axis
  int stride;      // pixels between patch origins; 0 for a single patch
};

struct PatchPlan {
  int base = 1536;
  int patch = 384;
  int feature_side = 24;
  int feature_patch_embed = 16;
  std::vector<ScaleLevel> scales;  // finest first

  int total_patches() const;
  int overlap_px(std::size_t scale) const { return patch - scales.at(scale).stride; }
};

/// The only supported input side is 1536.
PatchPlan plan_patches(int input_side);

struct Patch {
  int scale;       // index into PatchPlan::scales
  int grid_row;
  int grid_col;
  int row_offset;  // pixel offset in the scale's image
  int col_offset;
  Field pixels;    // patch x patch copy of the region
};

/// Scale-major (finest first), row-major within each grid. The 768 and 384
/// scales are produced by 2x2 average pooling of the input.
std::vector<Patch> split(const Field& image, const PatchPlan& plan);

struct VoronoiCell {
  int map_start;    // first merged-map coordinate owned by the patch
  int local_start;  // same position in the patch's feature coordinates
  int length;
};

/// One cell per patch along an axis of n patches with pixel stride
/// `stride_px`. Feature stride is stride_px / 16, centers sit at
/// 12 + i * stride_f, and a coordinate goes to the nearest center (lower
/// index on ties).
std::vector<VoronoiCell> voronoi_cells(int n, int stride_px, int feature_side = 24,
                                       int embed = 16);

int merged_side(int n, int stride_px, int feature_side = 24, int embed = 16);

/// Feature grid: square Field of side feature_side.
Field merge(const std::vector<Field>& features, int n, int stride_px, int feature_side = 24,
            int embed = 16);

/// Same as merge(), also returning how many times each output element was
/// written.
Field merge_counted(const std::vector<Field>& features, int n, int stride_px,
                    std::vector<int>& write_count, int feature_side = 24, int embed = 16);

}  // namespace depthbench
