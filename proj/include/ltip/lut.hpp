#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltip/algebra.hpp"

namespace ltip {

inline constexpr std::size_t kDefaultLutResolution = 65536;
inline constexpr std::size_t kMinLutResolution = 256;

enum class LutFunction { phi, phi_inv };

std::string_view to_string(LutFunction fn) noexcept;

class LutError : public std::runtime_error {
public:
    LutError(const std::string& what, double measured_error)
        : std::runtime_error(what), measured_error_(measured_error) {}
    double measured_error() const noexcept { return measured_error_; }

private:
    double measured_error_;
};

/// Uniformly sampled table of phi or phi_inv with linear interpolation.
///
/// The table spans [lower, upper]. Every cell's worst interpolation error is
/// measured at build time; cells whose error would exceed 1/resolution are
/// marked direct and evaluated with the exact function instead, as is any
/// argument outside the table. max_abs_error() therefore bounds
/// |lut(x) - f(x)| for every x.
class Lut {
public:
    static Lut build(LutFunction fn, const Algebra& algebra, std::size_t resolution = kDefaultLutResolution);

    double operator()(double x) const {
        if (!(x >= lower_ && x < upper_)) return direct(x);
        const double t = (x - lower_) * inv_step_;
        std::size_t i = static_cast<std::size_t>(t);
        if (i >= direct_.size()) i = direct_.size() - 1;
        if (direct_[i]) return direct(x);
        const double f = t - static_cast<double>(i);
        return samples_[i] + f * (samples_[i + 1] - samples_[i]);
    }

    LutFunction function() const noexcept { return fn_; }
    const Algebra& algebra() const noexcept { return algebra_; }
    std::size_t resolution() const noexcept { return samples_.size(); }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    /// Upper bound on the interpolation error over the whole real line.
    double max_abs_error() const noexcept { return max_abs_error_; }
    double error_bound() const noexcept { return 1.0 / static_cast<double>(samples_.size()); }
    /// Fraction of cells answered by interpolation.
    double coverage() const noexcept { return coverage_; }

    std::string summary() const;

private:
    Lut() = default;
    double direct(double x) const;

    LutFunction fn_ = LutFunction::phi;
    Algebra algebra_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double inv_step_ = 0.0;
    double max_abs_error_ = 0.0;
    double coverage_ = 0.0;
    std::vector<double> samples_;
    std::vector<std::uint8_t> direct_;  // one flag per cell
};

}  // namespace ltip
