#include "ltip/pyramid.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "ltip/parallel.hpp"

namespace ltip {

namespace {

constexpr double k0 = 1.0 / 16.0;
constexpr double k1 = 4.0 / 16.0;
constexpr double k2 = 6.0 / 16.0;

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Horizontal binomial tap at column x of one row, replicate border.
inline double htap(std::span<const double> r, int x, int w) {
    return k0 * r[clampi(x - 2, 0, w - 1)] + k1 * r[clampi(x - 1, 0, w - 1)] + k2 * r[x] +
           k1 * r[clampi(x + 1, 0, w - 1)] + k0 * r[clampi(x + 2, 0, w - 1)];
}

// Vertical pass over a column-blurred intermediate, sampling output rows
// y_out * stride and columns as given.
Plane vertical_pass(const Plane& tmp, int out_h, int stride, int threads) {
    const int w = tmp.width();
    const int h = tmp.height();
    Plane out(w, out_h);
    for_each_row_tile(out_h, threads, [&](int y0, int y1) {
        for (int yo = y0; yo < y1; ++yo) {
            const int y = yo * stride;
            auto r0 = tmp.row(clampi(y - 2, 0, h - 1));
            auto r1 = tmp.row(clampi(y - 1, 0, h - 1));
            auto r2 = tmp.row(y);
            auto r3 = tmp.row(clampi(y + 1, 0, h - 1));
            auto r4 = tmp.row(clampi(y + 2, 0, h - 1));
            auto dst = out.row(yo);
            for (int x = 0; x < w; ++x) {
                dst[x] = k0 * r0[x] + k1 * r1[x] + k2 * r2[x] + k1 * r3[x] + k0 * r4[x];
            }
        }
    });
    return out;
}

}  // namespace

int auto_levels(int width, int height) {
    const int m = std::min(width, height);
    if (m < 1) return 1;
    const int floor_log2 = std::bit_width(static_cast<unsigned>(m)) - 1;
    return std::max(1, floor_log2 - 1);
}

Plane blur(const Plane& in, int threads) {
    const int w = in.width();
    const int h = in.height();
    Plane tmp(w, h);
    for_each_row_tile(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            auto src = in.row(y);
            auto dst = tmp.row(y);
            for (int x = 0; x < w; ++x) dst[x] = htap(src, x, w);
        }
    });
    return vertical_pass(tmp, h, 1, threads);
}

Plane reduce(const Plane& in, int threads) {
    const int w = in.width();
    const int h = in.height();
    const int wo = (w + 1) / 2;
    const int ho = (h + 1) / 2;
    Plane tmp(wo, h);
    for_each_row_tile(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            auto src = in.row(y);
            auto dst = tmp.row(y);
            for (int xo = 0; xo < wo; ++xo) dst[xo] = htap(src, 2 * xo, w);
        }
    });
    return vertical_pass(tmp, ho, 2, threads);
}

Plane expand(const Plane& coarse, int width, int height, int threads) {
    const int cw = coarse.width();
    const int ch = coarse.height();
    if ((width + 1) / 2 != cw || (height + 1) / 2 != ch) {
        throw DimensionError("expand: coarse plane does not match the requested size");
    }
    // Horizontal: even outputs (c[j-1] + 6 c[j] + c[j+1]) / 8, odd outputs (c[j] + c[j+1]) / 2.
    Plane tmp(width, ch);
    for_each_row_tile(ch, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            auto c = coarse.row(y);
            auto dst = tmp.row(y);
            for (int x = 0; x < width; ++x) {
                const int j = x / 2;
                if ((x & 1) == 0) {
                    dst[x] = (c[clampi(j - 1, 0, cw - 1)] + 6.0 * c[j] + c[clampi(j + 1, 0, cw - 1)]) / 8.0;
                } else {
                    dst[x] = (c[j] + c[clampi(j + 1, 0, cw - 1)]) / 2.0;
                }
            }
        }
    });
    Plane out(width, height);
    for_each_row_tile(height, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const int j = y / 2;
            auto dst = out.row(y);
            if ((y & 1) == 0) {
                auto a = tmp.row(clampi(j - 1, 0, ch - 1));
                auto b = tmp.row(j);
                auto c = tmp.row(clampi(j + 1, 0, ch - 1));
                for (int x = 0; x < width; ++x) dst[x] = (a[x] + 6.0 * b[x] + c[x]) / 8.0;
            } else {
                auto a = tmp.row(j);
                auto b = tmp.row(clampi(j + 1, 0, ch - 1));
                for (int x = 0; x < width; ++x) dst[x] = (a[x] + b[x]) / 2.0;
            }
        }
    });
    return out;
}

std::vector<Plane> gaussian_pyramid(const Plane& in, int levels, int threads) {
    if (levels < 1) throw std::invalid_argument("pyramid needs at least one level");
    std::vector<Plane> out;
    out.reserve(static_cast<std::size_t>(levels));
    out.push_back(in);
    for (int l = 1; l < levels; ++l) out.push_back(reduce(out.back(), threads));
    return out;
}

std::vector<Plane> laplacian_pyramid(const Plane& in, int levels, int threads) {
    std::vector<Plane> g = gaussian_pyramid(in, levels, threads);
    for (std::size_t l = 0; l + 1 < g.size(); ++l) {
        const Plane up = expand(g[l + 1], g[l].width(), g[l].height(), threads);
        auto dst = g[l].values();
        auto sub = up.values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= sub[i];
    }
    return g;
}

Plane collapse(std::span<const Plane> bands, int threads) {
    if (bands.empty()) throw std::invalid_argument("collapse: empty pyramid");
    Plane acc = bands.back();
    for (std::size_t l = bands.size() - 1; l-- > 0;) {
        Plane up = expand(acc, bands[l].width(), bands[l].height(), threads);
        auto dst = up.values();
        auto add = bands[l].values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += add[i];
        acc = std::move(up);
    }
    return acc;
}

}  // namespace ltip
