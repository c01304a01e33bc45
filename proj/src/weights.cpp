#include "ltip/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltip/parallel.hpp"

namespace ltip {

void WeightParams::validate() const {
    if (!(wc_exponent >= 0.0) || !(ws_exponent >= 0.0) || !(we_exponent >= 0.0))
        throw std::invalid_argument("weight exponents must be non-negative");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0, 1)");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("sigma2 must be positive");
}

Plane contrast_weight(const Image& frame, int threads) {
    const Plane lum = luminance(frame);
    const int w = lum.width();
    const int h = lum.height();
    Plane out(w, h);
    for_each_row_tile(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const int yu = std::max(y - 1, 0);
            const int yd = std::min(y + 1, h - 1);
            for (int x = 0; x < w; ++x) {
                const int xl = std::max(x - 1, 0);
                const int xr = std::min(x + 1, w - 1);
                const double lap = lum(x, yu) + lum(x, yd) + lum(xl, y) + lum(xr, y) - 4.0 * lum(x, y);
                out(x, y) = std::abs(lap);
            }
        }
    });
    return out;
}

Plane saturation_weight(const Image& frame, int threads) {
    Plane out(frame.width(), frame.height());
    if (frame.channels() != 3) return out;
    const auto r = frame.channel(0).values();
    const auto g = frame.channel(1).values();
    const auto b = frame.channel(2).values();
    auto dst = out.values();
    const auto w = static_cast<std::size_t>(frame.width());
    for_each_row_tile(frame.height(), threads, [&](int y0, int y1) {
        for (std::size_t i = y0 * w; i < y1 * w; ++i) {
            const double mean = (r[i] + g[i] + b[i]) / 3.0;
            const double dr = r[i] - mean;
            const double dg = g[i] - mean;
            const double db = b[i] - mean;
            dst[i] = std::sqrt((dr * dr + dg * dg + db * db) / 3.0);
        }
    });
    return out;
}

Plane well_exposedness_weight(const Image& frame, const WeightParams& params, int threads) {
    Plane out(frame.width(), frame.height(), 1.0);
    auto dst = out.values();
    const double inv_two_sigma2 = 1.0 / (2.0 * params.sigma2);
    const auto w = static_cast<std::size_t>(frame.width());
    for_each_row_tile(frame.height(), threads, [&](int y0, int y1) {
        for (int c = 0; c < frame.channels(); ++c) {
            const auto src = frame.channel(c).values();
            for (std::size_t i = y0 * w; i < y1 * w; ++i) {
                const double d = src[i] - params.mu;
                dst[i] *= std::exp(-d * d * inv_two_sigma2);
            }
        }
    });
    return out;
}

Plane combine_weights(const Plane& contrast, const Plane& saturation, const Plane& well_exposedness,
                      const WeightParams& params, int threads) {
    if (!contrast.same_shape(saturation) || !contrast.same_shape(well_exposedness))
        throw DimensionError("combine_weights: maps differ in size");
    Plane out(contrast.width(), contrast.height());
    const auto c = contrast.values();
    const auto s = saturation.values();
    const auto e = well_exposedness.values();
    auto dst = out.values();
    const auto w = static_cast<std::size_t>(contrast.width());
    // std::pow(0, 0) == 1, as required for disabled measures.
    for_each_row_tile(contrast.height(), threads, [&](int y0, int y1) {
        for (std::size_t i = y0 * w; i < y1 * w; ++i) {
            dst[i] = std::pow(c[i], params.wc_exponent) * std::pow(s[i], params.ws_exponent) *
                         std::pow(e[i], params.we_exponent) +
                     kWeightStabilizer;
        }
    });
    return out;
}

WeightStack::WeightStack(std::vector<Plane> maps, bool normalized) : maps_(std::move(maps)), normalized_(normalized) {
    for (const auto& m : maps_) {
        if (!m.same_shape(maps_.front())) throw DimensionError("weight maps differ in size");
    }
}

WeightStack normalize_stack(const WeightStack& stack, int threads) {
    const std::size_t n = stack.frames();
    if (n == 0) throw std::invalid_argument("normalize_stack: empty stack");
    std::vector<Plane> out(n, Plane(stack.width(), stack.height()));
    const auto w = static_cast<std::size_t>(stack.width());
    const double uniform = 1.0 / static_cast<double>(n);
    for_each_row_tile(stack.height(), threads, [&](int y0, int y1) {
        for (std::size_t p = y0 * w; p < y1 * w; ++p) {
            double eta = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = stack[i].values()[p];
                if (!(v >= 0.0)) throw std::invalid_argument("normalize_stack: negative or NaN weight");
                eta += v;
            }
            if (eta < 1e-12) {
                for (std::size_t i = 0; i < n; ++i) out[i].values()[p] = uniform;
            } else {
                for (std::size_t i = 0; i < n; ++i) out[i].values()[p] = stack[i].values()[p] / eta;
            }
        }
    });
    return WeightStack(std::move(out), true);
}

WeightStack compute_weights(std::span<const Image> frames, const WeightParams& params, int threads) {
    params.validate();
    require_same_shape(frames, "compute_weights");
    std::vector<Plane> maps;
    maps.reserve(frames.size());
    for (const auto& f : frames) {
        maps.push_back(combine_weights(contrast_weight(f, threads), saturation_weight(f, threads),
                                       well_exposedness_weight(f, params, threads), params, threads));
    }
    return WeightStack(std::move(maps));
}

}  // namespace ltip
