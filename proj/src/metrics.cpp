#include "ltip/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ltip {

namespace {

// Neumaier compensated sum; keeps global statistics independent of the
// order in which pixels are visited to within a few ulps.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double r = (size - 1) / 2.0;
    double total = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - r;
        k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        total += k[static_cast<std::size_t>(i)];
    }
    for (double& v : k) v /= total;
    return k;
}

// Separable "valid" filtering: output is (w - n + 1) x (h - n + 1).
Plane filter_valid(const Plane& in, const std::vector<double>& k) {
    const int n = static_cast<int>(k.size());
    const int w = in.width();
    const int h = in.height();
    const int wo = w - n + 1;
    const int ho = h - n + 1;
    Plane tmp(wo, h);
    for (int y = 0; y < h; ++y) {
        auto src = in.row(y);
        auto dst = tmp.row(y);
        for (int x = 0; x < wo; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += k[static_cast<std::size_t>(i)] * src[x + i];
            dst[x] = acc;
        }
    }
    Plane out(wo, ho);
    for (int y = 0; y < ho; ++y) {
        auto dst = out.row(y);
        for (int i = 0; i < n; ++i) {
            auto src = tmp.row(y + i);
            const double kv = k[static_cast<std::size_t>(i)];
            for (int x = 0; x < wo; ++x) dst[x] += kv * src[x];
        }
    }
    return out;
}

Plane product(const Plane& a, const Plane& b) {
    Plane out(a.width(), a.height());
    const auto pa = a.values();
    const auto pb = b.values();
    auto d = out.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = pa[i] * pb[i];
    return out;
}

}  // namespace

void QualityWeights::validate() const {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("quality weight a must lie in [0, 1]");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("quality exponents must be positive");
}

double mean_ssim(const Plane& a, const Plane& b, const SsimParams& params) {
    if (!a.same_shape(b)) throw DimensionError("SSIM: images differ in size");
    if (a.empty()) throw DimensionError("SSIM: empty image");
    int window = params.window;
    if (window < 1 || window % 2 == 0) throw std::invalid_argument("SSIM window must be a positive odd integer");
    const int fit = std::min(a.width(), a.height());
    if (window > fit) window = fit % 2 == 1 ? fit : fit - 1;

    const auto k = gaussian_kernel(window, params.sigma);
    const Plane mu_a = filter_valid(a, k);
    const Plane mu_b = filter_valid(b, k);
    const Plane aa = filter_valid(product(a, a), k);
    const Plane bb = filter_valid(product(b, b), k);
    const Plane ab = filter_valid(product(a, b), k);

    CompensatedSum total;
    const auto ma = mu_a.values();
    const auto mb = mu_b.values();
    const auto saa = aa.values();
    const auto sbb = bb.values();
    const auto sab = ab.values();
    for (std::size_t i = 0; i < ma.size(); ++i) {
        const double va = saa[i] - ma[i] * ma[i];
        const double vb = sbb[i] - mb[i] * mb[i];
        const double cov = sab[i] - ma[i] * mb[i];
        const double num = (2.0 * ma[i] * mb[i] + params.c1) * (2.0 * cov + params.c2);
        const double den = (ma[i] * ma[i] + mb[i] * mb[i] + params.c1) * (va + vb + params.c2);
        total.add(num / den);
    }
    return total.value() / static_cast<double>(ma.size());
}

Plane normalized_log_luminance(const IrradianceMap& hdr) {
    Plane lum = luminance(hdr.values());
    auto v = lum.values();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double& x : v) {
        x = std::log1p(x);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double range = hi - lo;
    for (double& x : v) x = range > 0.0 ? (x - lo) / range : 0.0;
    return lum;
}

double structural_fidelity(const Image& ldr, const IrradianceMap& hdr, const SsimParams& params) {
    if (ldr.width() != hdr.width() || ldr.height() != hdr.height()) {
        throw DimensionError("structural_fidelity: LDR and HDR images differ in size");
    }
    return std::clamp(mean_ssim(luminance(ldr), normalized_log_luminance(hdr), params), 0.0, 1.0);
}

double statistical_naturalness(const Image& ldr, const NaturalnessParams& params) {
    const Plane lum = luminance(ldr);
    const auto v = lum.values();
    if (v.empty()) throw DimensionError("statistical_naturalness: empty image");
    CompensatedSum sum;
    for (double x : v) sum.add(x);
    const double mean = sum.value() / static_cast<double>(v.size());
    CompensatedSum sq;
    for (double x : v) sq.add((x - mean) * (x - mean));
    const double sd = std::sqrt(sq.value() / static_cast<double>(v.size()));
    const double dm = (mean - params.mean_center) / params.mean_spread;
    const double ds = (sd - params.std_center) / params.std_spread;
    return std::exp(-0.5 * dm * dm) * std::exp(-0.5 * ds * ds);
}

double overall_quality(double s, double n, const QualityWeights& weights) {
    return weights.a * std::pow(s, weights.alpha) + (1.0 - weights.a) * std::pow(n, weights.beta);
}

RmseResult rmse_to_baseline(const Image& test, const Image& baseline) {
    if (!test.same_shape(baseline)) throw DimensionError("rmse_to_baseline: images differ in shape");
    CompensatedSum acc;
    std::size_t count = 0;
    for (int c = 0; c < test.channels(); ++c) {
        const auto a = test.channel(c).values();
        const auto b = baseline.channel(c).values();
        for (std::size_t i = 0; i < a.size(); ++i) acc.add((a[i] - b[i]) * (a[i] - b[i]));
        count += a.size();
    }
    if (count == 0) throw DimensionError("rmse_to_baseline: empty image");
    RmseResult r;
    r.rmse = std::sqrt(acc.value() / static_cast<double>(count));
    r.log_rmse = r.rmse < 1e-12 ? -std::numeric_limits<double>::infinity() : std::log(r.rmse);
    return r;
}

double ssim_to_baseline(const Image& test, const Image& baseline, const SsimParams& params) {
    if (test.width() != baseline.width() || test.height() != baseline.height()) {
        throw DimensionError("ssim_to_baseline: images differ in size");
    }
    return mean_ssim(luminance(test), luminance(baseline), params);
}

QualityReport score_against_hdr(const Image& ldr, const IrradianceMap& hdr, const QualityWeights& weights,
                                const NaturalnessParams& naturalness, const SsimParams& ssim) {
    weights.validate();
    QualityReport r;
    r.s = structural_fidelity(ldr, hdr, ssim);
    r.n = statistical_naturalness(ldr, naturalness);
    r.q = overall_quality(*r.s, r.n, weights);
    return r;
}

QualityReport score_against_baseline(const Image& test, const Image& baseline, const NaturalnessParams& naturalness,
                                     const SsimParams& ssim) {
    QualityReport r;
    r.n = statistical_naturalness(test, naturalness);
    const RmseResult e = rmse_to_baseline(test, baseline);
    r.rmse = e.rmse;
    r.log_rmse = e.log_rmse;
    r.ssim = ssim_to_baseline(test, baseline, ssim);
    return r;
}

}  // namespace ltip
