#pragma once

#include <span>
#include <vector>

#include "ltip/image.hpp"

namespace ltip {

/// Added after the weight product so the per-pixel sum over frames stays positive.
inline constexpr double kWeightStabilizer = 1e-12;

/// Quality-measure exponents and the well-exposedness Gaussian.
/// Defaults: mu = 0.37 (skewed toward darker tones), sigma^2 = 0.2, unit exponents.
struct WeightParams {
    double wc_exponent = 1.0;
    double ws_exponent = 1.0;
    double we_exponent = 1.0;
    double mu = 0.37;
    double sigma2 = 0.2;

    /// Throws std::invalid_argument on negative exponents, mu outside (0,1) or sigma2 <= 0.
    void validate() const;
};

/// |3x3 four-neighbour Laplacian| of the mean-of-channels luminance, replicate borders.
Plane contrast_weight(const Image& frame, int threads = 1);

/// Population standard deviation of the three colour channels. All zero for
/// frames without exactly three channels.
Plane saturation_weight(const Image& frame, int threads = 1);

/// Product over channels of exp(-(v - mu)^2 / (2 sigma^2)).
Plane well_exposedness_weight(const Image& frame, const WeightParams& params, int threads = 1);

/// contrast^wc * saturation^ws * wellexp^we + kWeightStabilizer, with 0^0 = 1.
Plane combine_weights(const Plane& contrast, const Plane& saturation, const Plane& well_exposedness,
                      const WeightParams& params, int threads = 1);

/// One weight map per frame.
class WeightStack {
public:
    WeightStack() = default;
    explicit WeightStack(std::vector<Plane> maps, bool normalized = false);

    std::size_t frames() const noexcept { return maps_.size(); }
    bool normalized() const noexcept { return normalized_; }
    int width() const noexcept { return maps_.empty() ? 0 : maps_.front().width(); }
    int height() const noexcept { return maps_.empty() ? 0 : maps_.front().height(); }

    const Plane& operator[](std::size_t i) const { return maps_.at(i); }
    std::span<const Plane> maps() const noexcept { return maps_; }

private:
    std::vector<Plane> maps_;
    bool normalized_ = false;
};

/// Divides each weight by the per-pixel sum over frames. Falls back to 1/N
/// where the sum is below 1e-12.
WeightStack normalize_stack(const WeightStack& stack, int threads = 1);

/// Combined, unnormalized weights for every frame.
WeightStack compute_weights(std::span<const Image> frames, const WeightParams& params, int threads = 1);

}  // namespace ltip
