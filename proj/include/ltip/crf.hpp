#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ltip/algebra.hpp"

namespace ltip {

/// One measured camera response: intensity as a function of normalized irradiance.
struct CrfCurve {
    std::string name;
    std::vector<double> irradiance;
    std::vector<double> intensity;
};

/// Empty string when the curve is usable, otherwise the reason it is not:
/// fewer than two samples, mismatched counts, values outside [0,1], or a
/// column that decreases by more than 1e-6.
std::string validate_curve(const CrfCurve& curve);

struct DorfContents {
    std::vector<CrfCurve> curves;
    std::vector<std::string> warnings;
};

/// Parses DoRF text: repeated records of a name line, a type line, "I =" and
/// "B =" sample lists (samples may continue on following lines). Malformed or
/// invalid records are skipped with a warning. Throws std::runtime_error when
/// no curve survives.
DorfContents parse_dorf(std::istream& in);
DorfContents load_dorf(const std::filesystem::path& path);

void write_dorf(std::ostream& out, std::span<const CrfCurve> curves);

struct CrfFit {
    std::string name;
    double gain = 0.0;
    double rmse = 0.0;
};

/// Fits g(E) = phi_inv(gain * E) to the curve by minimizing RMSE over gain >= 0.
CrfFit fit_gain(const CrfCurve& curve, const Algebra& algebra);

/// Pointwise mean of the curves on the first curve's irradiance grid.
CrfCurve average_curve(std::span<const CrfCurve> curves);

struct CrfReport {
    std::vector<CrfFit> fits;
    CrfFit average;
    std::size_t best = 0;
    double mean_rmse = 0.0;
};

CrfReport compare_crf(std::span<const CrfCurve> curves, const Algebra& algebra);

}  // namespace ltip
