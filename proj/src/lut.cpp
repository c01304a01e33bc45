#include "ltip/lut.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace ltip {

namespace {

// Darkest code value kept in the phi_inv table: phi_inv's table spans the
// transform-space image of [0, 1 - 1/256].
constexpr double kPhiInvTableTop = 1.0 - 1.0 / 256.0;

constexpr int kGoldenIterations = 28;

// Largest |f(x) - g(x)| on [a, b] for a smooth error curve. Seeds with a few
// fixed probes, then refines around the best one by golden-section search.
template <typename Err>
double cell_max_error(Err&& err, double a, double b) {
    double best = 0.0;
    double best_x = a;
    for (int k = 0; k <= 4; ++k) {
        const double x = a + (b - a) * k / 4.0;
        const double e = err(x);
        if (e > best) {
            best = e;
            best_x = x;
        }
    }
    const double quarter = (b - a) / 4.0;
    double lo = std::max(a, best_x - quarter);
    double hi = std::min(b, best_x + quarter);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double e1 = err(x1);
    double e2 = err(x2);
    for (int it = 0; it < kGoldenIterations; ++it) {
        if (e1 < e2) {
            lo = x1;
            x1 = x2;
            e1 = e2;
            x2 = lo + kInvPhi * (hi - lo);
            e2 = err(x2);
        } else {
            hi = x2;
            x2 = x1;
            e2 = e1;
            x1 = hi - kInvPhi * (hi - lo);
            e1 = err(x1);
        }
    }
    return std::max({best, e1, e2});
}

}  // namespace

std::string_view to_string(LutFunction fn) noexcept {
    return fn == LutFunction::phi ? "phi" : "phi_inv";
}

double Lut::direct(double x) const {
    return fn_ == LutFunction::phi ? algebra_.phi(x) : algebra_.phi_inv(x);
}

Lut Lut::build(LutFunction fn, const Algebra& algebra, std::size_t resolution) {
    if (resolution < kMinLutResolution) {
        throw std::invalid_argument("LUT resolution must be at least " + std::to_string(kMinLutResolution));
    }
    Lut lut;
    lut.fn_ = fn;
    lut.algebra_ = algebra;
    lut.lower_ = 0.0;
    if (!algebra.bounded()) {
        lut.upper_ = 1.0;
    } else if (fn == LutFunction::phi) {
        lut.upper_ = (1.0 - kClampMargin) * algebra.upper_bound();
    } else {
        lut.upper_ = algebra.phi(kPhiInvTableTop * algebra.upper_bound());
    }

    const std::size_t cells = resolution - 1;
    const double step = (lut.upper_ - lut.lower_) / static_cast<double>(cells);
    lut.inv_step_ = 1.0 / step;
    lut.samples_.resize(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x = i == cells ? lut.upper_ : lut.lower_ + static_cast<double>(i) * step;
        lut.samples_[i] = lut.direct(x);
    }

    const double bound = 1.0 / static_cast<double>(resolution);
    lut.direct_.assign(cells, 0);
    double worst_tabulated = 0.0;
    double worst_any = 0.0;
    std::size_t tabulated = 0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = lut.lower_ + static_cast<double>(i) * step;
        const double b = i + 1 == cells ? lut.upper_ : a + step;
        const double s0 = lut.samples_[i];
        const double s1 = lut.samples_[i + 1];
        auto err = [&](double x) {
            const double f = (x - lut.lower_) * lut.inv_step_ - static_cast<double>(i);
            return std::abs(lut.direct(x) - (s0 + f * (s1 - s0)));
        };
        // Round-off allowance for the interpolation arithmetic itself.
        const double slack = 16.0 * DBL_EPSILON * std::max({1.0, std::abs(s0), std::abs(s1)});
        const double e = cell_max_error(err, a, b) * (1.0 + 1e-6) + slack;
        worst_any = std::max(worst_any, e);
        if (e <= bound) {
            ++tabulated;
            worst_tabulated = std::max(worst_tabulated, e);
        } else {
            lut.direct_[i] = 1;
        }
    }
    lut.max_abs_error_ = worst_tabulated;
    lut.coverage_ = static_cast<double>(tabulated) / static_cast<double>(cells);
    if (lut.coverage_ < 0.5) {
        std::ostringstream os;
        os << "LUT for " << to_string(fn) << " over " << algebra.describe() << " at resolution " << resolution
           << " meets the 1/resolution bound on only " << 100.0 * lut.coverage_
           << "% of cells (worst measured error " << worst_any << ")";
        throw LutError(os.str(), worst_any);
    }
    return lut;
}

std::string Lut::summary() const {
    std::ostringstream os;
    os << to_string(fn_) << "[" << algebra_.describe() << "] resolution=" << resolution() << " range=[" << lower_
       << ", " << upper_ << "] max_abs_error=" << max_abs_error_ << " bound=" << error_bound()
       << " coverage=" << coverage_;
    return os.str();
}

}  // namespace ltip
