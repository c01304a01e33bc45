#pragma once

#include <optional>

#include "ltip/image.hpp"
#include "ltip/irradiance.hpp"

namespace ltip {

/// Q = a S^alpha + (1 - a) N^beta.
struct QualityWeights {
    double a = 0.8012;
    double alpha = 0.3046;
    double beta = 0.7088;

    void validate() const;
};

/// Gaussian targets for the global luminance mean and standard deviation.
/// These are implementation defaults, not published constants.
struct NaturalnessParams {
    double mean_center = 0.5;
    double mean_spread = 0.2;
    double std_center = 0.25;
    double std_spread = 0.1;
};

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double c1 = 0.01 * 0.01;
    double c2 = 0.03 * 0.03;
};

/// Mean SSIM over all window positions fully inside the image (Gaussian
/// window). Windows larger than the image shrink to the largest odd size
/// that fits.
double mean_ssim(const Plane& a, const Plane& b, const SsimParams& params = {});

/// ln(1 + L) of the HDR luminance, rescaled to [0, 1] by its own extrema.
Plane normalized_log_luminance(const IrradianceMap& hdr);

/// SSIM between the LDR luminance and the normalized log-HDR luminance.
double structural_fidelity(const Image& ldr, const IrradianceMap& hdr, const SsimParams& params = {});

/// Product of unnormalized Gaussians at the global luminance mean and
/// population standard deviation.
double statistical_naturalness(const Image& ldr, const NaturalnessParams& params = {});

double overall_quality(double s, double n, const QualityWeights& weights = {});

struct RmseResult {
    double rmse = 0.0;
    /// Natural log of rmse; -infinity when rmse < 1e-12.
    double log_rmse = 0.0;
};

RmseResult rmse_to_baseline(const Image& test, const Image& baseline);

double ssim_to_baseline(const Image& test, const Image& baseline, const SsimParams& params = {});

struct QualityReport {
    std::optional<double> s;
    double n = 0.0;
    std::optional<double> q;
    std::optional<double> rmse;
    std::optional<double> log_rmse;
    std::optional<double> ssim;
};

/// Fills s, n, q. q is recomputed from s and n.
QualityReport score_against_hdr(const Image& ldr, const IrradianceMap& hdr, const QualityWeights& weights = {},
                                const NaturalnessParams& naturalness = {}, const SsimParams& ssim = {});

/// Fills n, rmse, log_rmse, ssim.
QualityReport score_against_baseline(const Image& test, const Image& baseline,
                                     const NaturalnessParams& naturalness = {}, const SsimParams& ssim = {});

}  // namespace ltip
