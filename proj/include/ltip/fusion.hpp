#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ltip/algebra.hpp"
#include "ltip/image.hpp"
#include "ltip/lut.hpp"
#include "ltip/weights.hpp"

namespace ltip {

enum class FusionMode { flat, pyramid };

std::string_view to_string(FusionMode mode) noexcept;
FusionMode parse_fusion_mode(std::string_view name);

/// Tables for phi and phi_inv of one algebra.
struct TransformTables {
    Lut phi;
    Lut phi_inv;

    static std::shared_ptr<const TransformTables> build(const Algebra& algebra,
                                                        std::size_t resolution = kDefaultLutResolution);
};

struct FusionConfig {
    Algebra algebra = Algebra::ltip();
    /// Per-pixel blending is the default. Pyramid blending in transform space
    /// amplifies band-pass mismatch near saturated frames by up to Phi(1 - eps).
    FusionMode mode = FusionMode::flat;
    /// Pyramid depth; 0 selects auto_levels().
    int levels = 0;
    WeightParams weight_params;
    bool use_lut = false;
    std::size_t lut_resolution = kDefaultLutResolution;
    int threads = 1;
    /// Prebuilt tables for use_lut. Built on demand when empty.
    std::shared_ptr<const TransformTables> tables;

    int resolved_levels(int width, int height) const;
};

/// How fuse_flat evaluates the per-pixel sum.
enum class FlatRoute {
    /// phi once per input, weighted real sum, phi_inv once.
    transform_space,
    /// w_1 (x) f_1 (+) w_2 (x) f_2 (+) ... with the algebra's closed forms.
    direct_operations,
};

/// Pointwise phi (LUT-backed when given).
Plane to_transform_space(const Plane& frame, const Algebra& algebra, const Lut* lut = nullptr, int threads = 1);
Image to_transform_space(const Image& frame, const Algebra& algebra, const Lut* lut = nullptr, int threads = 1);

/// Pointwise phi_inv_extended; exact inverse of to_transform_space.
Image from_transform_space(const Image& plane, const Algebra& algebra);

/// Maps a reconstructed transform-space value to an output intensity in
/// [0, 1 - kClampMargin]. Non-positive values map to 0.
double finish_pixel(double y, const Algebra& algebra, const Lut* phi_inv_lut = nullptr);

/// Per pixel (+)-sum of w_i (x) f_i for a normalized stack. Not clamped.
Image fuse_flat(std::span<const Image> frames, const WeightStack& stack, const FusionConfig& config,
                FlatRoute route = FlatRoute::transform_space);

/// Multiresolution decomposition of every frame (transform space) and weight
/// map (ordinary arithmetic).
struct Pyramids {
    int levels = 0;
    /// bands[frame][channel][level]
    std::vector<std::vector<std::vector<Plane>>> bands;
    /// lowpass[frame][level]
    std::vector<std::vector<Plane>> lowpass;
};

Pyramids build_pyramids(std::span<const Image> frames, const WeightStack& stack, const FusionConfig& config);

/// Blends band-pass coefficients with low-pass weights in transform space,
/// collapses, and maps back with finish_pixel.
Image fuse_pyramid(std::span<const Image> frames, const WeightStack& stack, const FusionConfig& config);

/// Weights, normalization and blending. Output lies in [0, 1 - kClampMargin].
Image fuse(std::span<const Image> frames, const FusionConfig& config);

}  // namespace ltip
