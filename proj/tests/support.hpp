#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ltip/algebra.hpp"
#include "ltip/image.hpp"

namespace ltip::testing {

inline Image random_image(int w, int h, int channels, std::mt19937_64& rng, double hi = 1.0 - kClampMargin) {
    std::uniform_real_distribution<double> u(0.0, hi);
    Image img(w, h, channels);
    for (int c = 0; c < channels; ++c) {
        for (double& v : img.channel(c).values()) v = u(rng);
    }
    return img;
}

/// Frames with smooth structure plus noise, so contrast weights are not flat.
inline std::vector<Image> random_bracket(int w, int h, int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Image> frames;
    for (int i = 0; i < n; ++i) {
        Image img(w, h, 3);
        const double gain = 0.2 + 0.8 * u(rng);
        for (int c = 0; c < 3; ++c) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const double base = 0.5 + 0.4 * std::sin(0.3 * x + 0.2 * y + c);
                    img(x, y, c) = clamp_to_domain(gain * base + 0.1 * u(rng));
                }
            }
        }
        frames.push_back(std::move(img));
    }
    return frames;
}

inline double max_abs_diff(const Image& a, const Image& b) {
    double m = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
        const auto va = a.channel(c).values();
        const auto vb = b.channel(c).values();
        for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    }
    return m;
}

inline double max_abs_diff(const Plane& a, const Plane& b) {
    double m = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    return m;
}

inline std::vector<Algebra> bounded_models() {
    return {Algebra::ltip(),          Algebra::classical_lip(1.0), Algebra::parametric(0.5), Algebra::parametric(0.75),
            Algebra::parametric(1.0), Algebra::parametric(1.33),   Algebra::parametric(2.0)};
}

}  // namespace ltip::testing
