#include "ltip/irradiance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltip {

ExposedFrame::ExposedFrame(Image image, double exposure_time)
    : image_(std::move(image)), exposure_time_(exposure_time) {
    if (!(exposure_time > 0.0) || !std::isfinite(exposure_time)) {
        throw std::invalid_argument("exposure time must be positive and finite");
    }
}

IrradianceMap::IrradianceMap(Image values) : values_(std::move(values)) {
    for (int c = 0; c < values_.channels(); ++c) {
        for (double v : values_.channel(c).values()) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("irradiance must be finite and >= 0");
        }
    }
}

IrradianceMap recover_irradiance(const ExposedFrame& frame, const Algebra& algebra) {
    const Image& img = frame.image();
    Image out(img.width(), img.height(), img.channels());
    const double inv_dt = 1.0 / frame.exposure_time();
    for (int c = 0; c < img.channels(); ++c) {
        const auto src = img.channel(c).values();
        auto dst = out.channel(c).values();
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = algebra.phi(src[i]) * inv_dt;
    }
    return IrradianceMap(std::move(out));
}

IrradianceMap merge_irradiance(std::span<const IrradianceMap> maps, const WeightStack& stack) {
    if (maps.empty()) throw std::invalid_argument("merge_irradiance: no maps");
    if (stack.frames() != maps.size()) throw DimensionError("merge_irradiance: one weight map per irradiance map");
    const IrradianceMap& ref = maps.front();
    for (const auto& m : maps) {
        if (!m.values().same_shape(ref.values())) throw DimensionError("merge_irradiance: maps differ in size");
    }
    if (stack.width() != ref.width() || stack.height() != ref.height()) {
        throw DimensionError("merge_irradiance: weights do not match map size");
    }
    Image out(ref.width(), ref.height(), ref.channels());
    const std::size_t n = maps.size();
    for (int c = 0; c < ref.channels(); ++c) {
        auto dst = out.channel(c).values();
        for (std::size_t p = 0; p < dst.size(); ++p) {
            double num = 0.0;
            double eta = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = stack[i].values()[p];
                num += w * maps[i].values().channel(c).values()[p];
                eta += w;
            }
            dst[p] = eta > 0.0 ? num / eta : 0.0;
        }
    }
    return IrradianceMap(std::move(out));
}

Image tonemap_ltip(const IrradianceMap& map, const Algebra& algebra) {
    const Image& src = map.values();
    Image out(src.width(), src.height(), src.channels());
    for (int c = 0; c < src.channels(); ++c) {
        const auto s = src.channel(c).values();
        auto d = out.channel(c).values();
        for (std::size_t i = 0; i < s.size(); ++i) d[i] = algebra.phi_inv(s[i]);
    }
    return out;
}

double verify_equivalence(std::span<const ExposedFrame> frames, const FusionConfig& config) {
    if (frames.empty()) throw std::invalid_argument("verify_equivalence: no frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].exposure_time() != 1.0) {
            std::ostringstream os;
            os << "verify_equivalence: frame " << i << " has exposure time " << frames[i].exposure_time()
               << "; the irradiance/exposure-fusion identity only holds when every exposure time is 1";
            throw EquivalenceError(os.str());
        }
    }
    std::vector<Image> images;
    images.reserve(frames.size());
    for (const auto& f : frames) images.push_back(f.image());

    const WeightStack raw = compute_weights(images, config.weight_params, config.threads);
    const WeightStack normalized = normalize_stack(raw, config.threads);

    FusionConfig direct = config;
    direct.use_lut = false;
    const Image fused = fuse_flat(images, normalized, direct, FlatRoute::direct_operations);

    std::vector<IrradianceMap> maps;
    maps.reserve(frames.size());
    for (const auto& f : frames) maps.push_back(recover_irradiance(f, config.algebra));
    const Image tonemapped = tonemap_ltip(merge_irradiance(maps, raw), config.algebra);

    double worst = 0.0;
    for (int c = 0; c < fused.channels(); ++c) {
        const auto a = fused.channel(c).values();
        const auto b = tonemapped.channel(c).values();
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace ltip
