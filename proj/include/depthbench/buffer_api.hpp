#pragma once

// Entry points on caller-owned contiguous row-major float32 buffers, for
// language bindings. Values are widened to double exactly as the file
// loaders do, then handed to the same core functions the CLI uses, so
// results agree bit for bit. Non-finite values mark invalid pixels.

#include <cstddef>
#include <map>
#include <string>

#include "depthbench/raster.hpp"

namespace depthbench::buffer {

struct BufferView {
  const float* data = nullptr;
  std::size_t length = 0;
  int width = 0;
  int height = 0;
};

/// Throws StructuralError unless length == width * height and data is set.
Field to_field(const BufferView& view);

/// Weighted boundary F1 of `pred` against `gt`, with the CLI's default
/// validity policy and prediction clamping.
double boundary_f1(const BufferView& pred, const BufferView& gt, double t_min = 5.0,
                   double t_max = 25.0, int steps = 21, bool nms = true,
                   const ValidityPolicy& policy = ValidityPolicy(1e-3, 1e4));

/// Keys: delta1, delta2, delta3, abs_rel, log10, si_log.
std::map<std::string, double> depth_metrics(const BufferView& pred, const BufferView& gt,
                                            double min_depth = 1e-3, double max_depth = 1e4);

/// Curriculum loss terms by name plus "total"; `gt` is the target c and
/// `pred` the estimate c_hat, both canonical inverse depth.
std::map<std::string, double> losses(const BufferView& pred, const BufferView& gt,
                                     const std::string& preset_name);

}  // namespace depthbench::buffer
