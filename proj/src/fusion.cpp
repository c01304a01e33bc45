#include "ltip/fusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ltip/parallel.hpp"
#include "ltip/pyramid.hpp"

namespace ltip {

namespace {

void check_inputs(std::span<const Image> frames, const WeightStack& stack, const char* context) {
    if (frames.empty()) throw std::invalid_argument(std::string(context) + ": no frames");
    require_same_shape(frames, context);
    if (stack.frames() != frames.size()) {
        throw DimensionError(std::string(context) + ": weight stack has " + std::to_string(stack.frames()) +
                             " maps for " + std::to_string(frames.size()) + " frames");
    }
    if (stack.width() != frames.front().width() || stack.height() != frames.front().height()) {
        throw DimensionError(std::string(context) + ": weight maps do not match frame size");
    }
    if (!stack.normalized()) throw std::invalid_argument(std::string(context) + ": weight stack must be normalized");
}

std::shared_ptr<const TransformTables> tables_for(const FusionConfig& config) {
    if (!config.use_lut) return nullptr;
    if (config.tables && config.tables->phi.algebra() == config.algebra &&
        config.tables->phi.resolution() == config.lut_resolution) {
        return config.tables;
    }
    return TransformTables::build(config.algebra, config.lut_resolution);
}

}  // namespace

std::string_view to_string(FusionMode mode) noexcept {
    return mode == FusionMode::flat ? "flat" : "pyramid";
}

FusionMode parse_fusion_mode(std::string_view name) {
    if (name == "flat") return FusionMode::flat;
    if (name == "pyramid") return FusionMode::pyramid;
    throw std::invalid_argument("unknown fusion mode '" + std::string(name) + "' (expected pyramid|flat)");
}

std::shared_ptr<const TransformTables> TransformTables::build(const Algebra& algebra, std::size_t resolution) {
    return std::make_shared<const TransformTables>(TransformTables{
        Lut::build(LutFunction::phi, algebra, resolution), Lut::build(LutFunction::phi_inv, algebra, resolution)});
}

int FusionConfig::resolved_levels(int width, int height) const {
    if (levels < 0) throw std::invalid_argument("pyramid levels must be positive (or 0 for auto)");
    return levels == 0 ? auto_levels(width, height) : levels;
}

Plane to_transform_space(const Plane& frame, const Algebra& algebra, const Lut* lut, int threads) {
    Plane out(frame.width(), frame.height());
    const auto src = frame.values();
    auto dst = out.values();
    const auto w = static_cast<std::size_t>(frame.width());
    for_each_row_tile(frame.height(), threads, [&](int y0, int y1) {
        if (lut) {
            for (std::size_t i = y0 * w; i < y1 * w; ++i) dst[i] = (*lut)(src[i]);
        } else {
            for (std::size_t i = y0 * w; i < y1 * w; ++i) dst[i] = algebra.phi(src[i]);
        }
    });
    return out;
}

Image to_transform_space(const Image& frame, const Algebra& algebra, const Lut* lut, int threads) {
    std::vector<Plane> planes;
    planes.reserve(static_cast<std::size_t>(frame.channels()));
    for (int c = 0; c < frame.channels(); ++c) {
        planes.push_back(to_transform_space(frame.channel(c), algebra, lut, threads));
    }
    return Image(std::move(planes));
}

Image from_transform_space(const Image& plane, const Algebra& algebra) {
    Image out(plane.width(), plane.height(), plane.channels());
    for (int c = 0; c < plane.channels(); ++c) {
        const auto src = plane.channel(c).values();
        auto dst = out.channel(c).values();
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = algebra.phi_inv_extended(src[i]);
    }
    return out;
}

double finish_pixel(double y, const Algebra& algebra, const Lut* phi_inv_lut) {
    if (!(y > 0.0)) return 0.0;
    const double x = phi_inv_lut ? (*phi_inv_lut)(y) : algebra.phi_inv(y);
    return std::min(x, 1.0 - kClampMargin);
}

Image fuse_flat(std::span<const Image> frames, const WeightStack& stack, const FusionConfig& config,
                FlatRoute route) {
    check_inputs(frames, stack, "fuse_flat");
    const Algebra& alg = config.algebra;
    const auto tables = route == FlatRoute::transform_space ? tables_for(config) : nullptr;
    const std::size_t n = frames.size();
    const int w = frames.front().width();
    Image out(w, frames.front().height(), frames.front().channels());

    for (int c = 0; c < out.channels(); ++c) {
        auto dst = out.channel(c).values();
        for_each_row_tile(out.height(), config.threads, [&](int y0, int y1) {
            for (std::size_t p = static_cast<std::size_t>(y0) * w; p < static_cast<std::size_t>(y1) * w; ++p) {
                if (route == FlatRoute::direct_operations) {
                    double acc = alg.scalar_multiply(stack[0].values()[p], frames[0].channel(c).values()[p]);
                    for (std::size_t i = 1; i < n; ++i) {
                        acc = alg.add(acc, alg.scalar_multiply(stack[i].values()[p], frames[i].channel(c).values()[p]));
                    }
                    dst[p] = acc;
                } else {
                    double y = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double f = frames[i].channel(c).values()[p];
                        y += stack[i].values()[p] * (tables ? tables->phi(f) : alg.phi(f));
                    }
                    dst[p] = tables ? tables->phi_inv(y) : alg.phi_inv(y);
                }
            }
        });
    }
    return out;
}

Pyramids build_pyramids(std::span<const Image> frames, const WeightStack& stack, const FusionConfig& config) {
    check_inputs(frames, stack, "build_pyramids");
    const int w = frames.front().width();
    const int h = frames.front().height();
    if (w < 2 || h < 2) throw DimensionError("build_pyramids: image smaller than 2x2");
    const auto tables = tables_for(config);
    Pyramids out;
    out.levels = config.resolved_levels(w, h);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::vector<std::vector<Plane>> per_channel;
        for (int c = 0; c < frames[i].channels(); ++c) {
            const Plane t = to_transform_space(frames[i].channel(c), config.algebra, tables ? &tables->phi : nullptr,
                                               config.threads);
            per_channel.push_back(laplacian_pyramid(t, out.levels, config.threads));
        }
        out.bands.push_back(std::move(per_channel));
        out.lowpass.push_back(gaussian_pyramid(stack[i], out.levels, config.threads));
    }
    return out;
}

Image fuse_pyramid(std::span<const Image> frames, const WeightStack& stack, const FusionConfig& config) {
    check_inputs(frames, stack, "fuse_pyramid");
    const int w = frames.front().width();
    const int h = frames.front().height();
    if (w < 2 || h < 2) throw DimensionError("fuse_pyramid: image smaller than 2x2");
    const auto tables = tables_for(config);
    const int levels = config.resolved_levels(w, h);
    const int threads = config.threads;

    std::vector<std::vector<Plane>> weight_pyramids;
    weight_pyramids.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) weight_pyramids.push_back(gaussian_pyramid(stack[i], levels, threads));

    Image out(w, h, frames.front().channels());
    for (int c = 0; c < out.channels(); ++c) {
        std::vector<Plane> blended;
        // Frames are accumulated in index order so every pixel sees the same
        // summation sequence for any thread count.
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const Plane t =
                to_transform_space(frames[i].channel(c), config.algebra, tables ? &tables->phi : nullptr, threads);
            const std::vector<Plane> bands = laplacian_pyramid(t, levels, threads);
            if (blended.empty()) {
                for (const auto& b : bands) blended.emplace_back(b.width(), b.height());
            }
            for (int l = 0; l < levels; ++l) {
                const auto coeff = bands[l].values();
                const auto weight = weight_pyramids[i][l].values();
                auto acc = blended[l].values();
                const auto lw = static_cast<std::size_t>(bands[l].width());
                for_each_row_tile(bands[l].height(), threads, [&](int y0, int y1) {
                    for (std::size_t p = y0 * lw; p < y1 * lw; ++p) acc[p] += weight[p] * coeff[p];
                });
            }
        }
        const Plane y = collapse(blended, threads);
        const auto src = y.values();
        auto dst = out.channel(c).values();
        const Lut* inv = tables ? &tables->phi_inv : nullptr;
        for_each_row_tile(h, threads, [&](int y0, int y1) {
            for (std::size_t p = static_cast<std::size_t>(y0) * w; p < static_cast<std::size_t>(y1) * w; ++p) {
                dst[p] = finish_pixel(src[p], config.algebra, inv);
            }
        });
    }
    return out;
}

Image fuse(std::span<const Image> frames, const FusionConfig& config) {
    if (frames.empty()) throw std::invalid_argument("fuse: no frames");
    require_same_shape(frames, "fuse");
    const WeightStack stack = normalize_stack(compute_weights(frames, config.weight_params, config.threads), config.threads);
    if (config.mode == FusionMode::pyramid) return fuse_pyramid(frames, stack, config);
    Image out = fuse_flat(frames, stack, config);
    for (int c = 0; c < out.channels(); ++c) {
        for (double& v : out.channel(c).values()) v = clamp_to_domain(v);
    }
    return out;
}

}  // namespace ltip
