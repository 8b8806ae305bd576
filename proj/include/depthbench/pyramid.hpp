#pragma once

// Multi-scale pyramids and discrete derivative operators. Kernels in
// `depthbench` are row-parallel (OpenMP); `depthbench::reference` keeps the
// plain serial versions used by the test suite and the benchmarks.

#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench {

struct PyramidSpec {
  int levels = 1;  // M, level 0 is the input
};

/// gx and gy share one validity mask.
struct GradientField {
  Field gx;
  Field gy;
};

/// 2x2 average pooling over valid pixels. Output dims are floor(dims / 2); an
/// output pixel is valid iff at least one of its four inputs is valid.
Field downsample2(const Field& x);

/// Level j has dims floor(dims / 2^j). Throws DomainError if the input has
/// fewer than 2^(M-1) pixels along either axis.
std::vector<Field> build_pyramid(const Field& x, const PyramidSpec& spec);

/// Scharr derivatives, taps (3, 10, 3) x (1, 0, -1) scaled by 1/32 so a unit
/// ramp has unit gradient. Edge replication at the border; invalid wherever
/// the 3x3 neighborhood touches an invalid pixel.
GradientField scharr(const Field& x);

/// 5-point Laplacian with edge replication; invalid wherever the stencil
/// touches an invalid pixel.
Field laplace(const Field& x);

namespace reference {

Field downsample2(const Field& x);
GradientField scharr(const Field& x);
Field laplace(const Field& x);

}  // namespace reference
}  // namespace depthbench
