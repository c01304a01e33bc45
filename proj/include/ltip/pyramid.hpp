#pragma once

#include <span>
#include <vector>

#include "ltip/image.hpp"

namespace ltip {

/// floor(log2(min(width, height))) - 1, at least 1.
int auto_levels(int width, int height);

/// Separable [1 4 6 4 1]/16 blur with replicate borders.
Plane blur(const Plane& in, int threads = 1);

/// Blur, then keep every second sample: result is ceil(w/2) x ceil(h/2).
Plane reduce(const Plane& in, int threads = 1);

/// Zero-insertion upsample to width x height followed by the same kernel
/// scaled by 4 (2 per axis). Borders replicate on the coarse grid.
Plane expand(const Plane& coarse, int width, int height, int threads = 1);

/// levels planes; level 0 is the input.
std::vector<Plane> gaussian_pyramid(const Plane& in, int levels, int threads = 1);

/// levels planes: levels-1 band-pass differences followed by the coarsest
/// low-pass residual. levels == 1 returns the input itself.
std::vector<Plane> laplacian_pyramid(const Plane& in, int levels, int threads = 1);

/// Inverse of laplacian_pyramid.
Plane collapse(std::span<const Plane> bands, int threads = 1);

}  // namespace ltip
