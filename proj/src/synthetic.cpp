#include "ltip/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ltip/algebra.hpp"

namespace ltip {

Image synthetic_scene(int width, int height, std::uint32_t seed) {
    Image scene(width, height, 3);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const double fx = 2.0 + 4.0 * jitter(rng);
    const double fy = 3.0 + 5.0 * jitter(rng);
    const double phase = 2.0 * std::numbers::pi * jitter(rng);
    const double sun_x = 0.55 + 0.3 * jitter(rng);
    const double sun_y = 0.12 + 0.1 * jitter(rng);
    const double tint[3] = {1.0, 0.85 + 0.1 * jitter(rng), 0.6 + 0.2 * jitter(rng)};
    for (int y = 0; y < height; ++y) {
        const double v = (y + 0.5) / height;
        for (int x = 0; x < width; ++x) {
            const double u = (x + 0.5) / width;
            const double texture =
                0.5 + 0.25 * std::sin(2.0 * std::numbers::pi * fx * u + phase) * std::cos(2.0 * std::numbers::pi * fy * v);
            double base;
            if (v < 0.45) {
                base = 4.0 + 12.0 * (0.45 - v) + 2.0 * texture;  // sky
            } else {
                base = 0.02 + 0.35 * texture * (1.0 - v) + 0.05 * jitter(rng);  // foreground
            }
            const double dx = u - sun_x;
            const double dy = (v - sun_y) * height / static_cast<double>(width);
            const double r2 = dx * dx + dy * dy;
            const double sun = r2 < 0.004 ? 400.0 : 60.0 * std::exp(-r2 / 0.01);
            for (int c = 0; c < 3; ++c) {
                const double colour = v < 0.45 ? (c == 2 ? 1.0 : 0.7 + 0.15 * c) : tint[c];
                scene(x, y, c) = base * colour + sun;
            }
        }
    }
    return scene;
}

std::vector<ExposedFrame> synthetic_bracket(const Image& scene, std::span<const double> exposure_times,
                                            const CameraModel& camera) {
    std::vector<ExposedFrame> out;
    out.reserve(exposure_times.size());
    for (const double t : exposure_times) {
        Image frame(scene.width(), scene.height(), scene.channels());
        for (int c = 0; c < scene.channels(); ++c) {
            const auto src = scene.channel(c).values();
            auto dst = frame.channel(c).values();
            for (std::size_t i = 0; i < src.size(); ++i) {
                double v = std::pow(std::max(src[i] * t, 0.0), 1.0 / camera.gamma);
                if (camera.quantize) v = std::floor(std::min(v, 1.0) * 255.0 + 0.5) / 255.0;
                dst[i] = clamp_to_domain(v);
            }
        }
        out.emplace_back(std::move(frame), t);
    }
    return out;
}

std::vector<double> exposure_series(std::size_t count, double base, double stops) {
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) t[k] = base * std::exp2(static_cast<double>(k) * stops);
    return t;
}

}  // namespace ltip
