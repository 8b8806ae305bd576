#pragma once

#include "depthbench/raster.hpp"

namespace depthbench {

/// Bilinear resize with pixel-center alignment (no antialiasing). Only valid
/// source pixels contribute; weights are renormalized over them, and an
/// output pixel with no valid tap is invalid.
Field resize_bilinear(const Field& x, int width, int height);

}  // namespace depthbench
