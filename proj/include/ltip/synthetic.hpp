#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltip/image.hpp"
#include "ltip/irradiance.hpp"

namespace ltip {

/// Procedural high-dynamic-range scene: dim textured foreground, a bright
/// sky gradient and a very bright disk. Values are relative radiance > 0.
Image synthetic_scene(int width, int height, std::uint32_t seed = 1);

struct CameraModel {
    /// Display gamma of the response curve v = (E t)^(1/gamma).
    double gamma = 2.2;
    /// Quantize to 8-bit codes like a stored JPEG/PNG frame.
    bool quantize = true;
};

/// One frame per exposure time: clip((E t)^(1/gamma)) into [0, 1 - kClampMargin],
/// optionally rounded to 8-bit codes first. Sensor saturation therefore lands
/// exactly on 1 - kClampMargin.
std::vector<ExposedFrame> synthetic_bracket(const Image& scene, std::span<const double> exposure_times,
                                            const CameraModel& camera = {});

/// exposures evenly spaced in stops: base * 2^(k * stops) for k in [0, count).
std::vector<double> exposure_series(std::size_t count, double base = 1.0 / 64.0, double stops = 2.0);

}  // namespace ltip
