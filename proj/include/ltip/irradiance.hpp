#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ltip/algebra.hpp"
#include "ltip/fusion.hpp"
#include "ltip/image.hpp"
#include "ltip/weights.hpp"

namespace ltip {

/// An acquired frame together with its exposure time in seconds.
class ExposedFrame {
public:
    ExposedFrame(Image image, double exposure_time);

    const Image& image() const noexcept { return image_; }
    double exposure_time() const noexcept { return exposure_time_; }

private:
    Image image_;
    double exposure_time_;
};

/// Relative scene radiance per pixel and channel; non-negative and finite.
class IrradianceMap {
public:
    IrradianceMap() = default;
    /// Throws std::invalid_argument on negative or non-finite values.
    explicit IrradianceMap(Image values);

    const Image& values() const noexcept { return values_; }
    int width() const noexcept { return values_.width(); }
    int height() const noexcept { return values_.height(); }
    int channels() const noexcept { return values_.channels(); }

private:
    Image values_;
};

/// E = phi(f) / dt, the generative function standing in for the inverse CRF.
IrradianceMap recover_irradiance(const ExposedFrame& frame, const Algebra& algebra);

/// E_HDR = sum_i w_i E_i / sum_i w_i per pixel. The stack need not be normalized.
IrradianceMap merge_irradiance(std::span<const IrradianceMap> maps, const WeightStack& stack);

/// f = phi_inv(E).
Image tonemap_ltip(const IrradianceMap& map, const Algebra& algebra);

/// Raised when the frames violate the unit-exposure assumption of the
/// equivalence between irradiance fusion and exposure fusion.
class EquivalenceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Max |fuse_flat(direct closed-form operations) - tonemap(merge(recover))|
/// over all pixels and channels. All exposure times must equal 1.
double verify_equivalence(std::span<const ExposedFrame> frames, const FusionConfig& config);

}  // namespace ltip
