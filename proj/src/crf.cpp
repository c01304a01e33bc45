#include "ltip/crf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ltip {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool starts_with_key(const std::string& line, char key) {
    if (line.empty() || line[0] != key) return false;
    const auto rest = trim(line.substr(1));
    return !rest.empty() && rest[0] == '=';
}

bool is_numeric_line(const std::string& line) {
    if (line.empty()) return false;
    const char c = line[0];
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

bool parse_numbers(const std::string& text, std::vector<double>& out) {
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) return false;
        out.push_back(v);
    }
    return true;
}

// Reads "<key> = v v v" plus numeric continuation lines starting at lines[i].
// Advances i past the consumed lines.
bool read_samples(const std::vector<std::string>& lines, std::size_t& i, char key, std::vector<double>& out) {
    if (i >= lines.size() || !starts_with_key(lines[i], key)) return false;
    const std::string& first = lines[i];
    if (!parse_numbers(first.substr(first.find('=') + 1), out)) return false;
    ++i;
    while (i < lines.size() && is_numeric_line(lines[i])) {
        if (!parse_numbers(lines[i], out)) return false;
        ++i;
    }
    return true;
}

double rmse_at(const CrfCurve& curve, const Algebra& algebra, double gain) {
    double acc = 0.0;
    for (std::size_t j = 0; j < curve.irradiance.size(); ++j) {
        const double d = curve.intensity[j] - algebra.phi_inv(gain * curve.irradiance[j]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(curve.irradiance.size()));
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto j = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[j - 1];
    const double x1 = xs[j];
    if (x1 <= x0) return ys[j];
    return ys[j - 1] + (ys[j] - ys[j - 1]) * (x - x0) / (x1 - x0);
}

}  // namespace

std::string validate_curve(const CrfCurve& curve) {
    constexpr double tol = 1e-6;
    if (curve.irradiance.size() != curve.intensity.size()) {
        return "sample counts differ (" + std::to_string(curve.irradiance.size()) + " irradiance vs " +
               std::to_string(curve.intensity.size()) + " intensity)";
    }
    if (curve.irradiance.size() < 2) return "fewer than two samples";
    for (std::size_t j = 0; j < curve.irradiance.size(); ++j) {
        const double e = curve.irradiance[j];
        const double b = curve.intensity[j];
        if (e < -tol || e > 1.0 + tol || b < -tol || b > 1.0 + tol) return "sample outside [0, 1]";
        if (j > 0 && e < curve.irradiance[j - 1] - tol) return "irradiance column decreases";
        if (j > 0 && b < curve.intensity[j - 1] - tol) return "intensity column decreases";
    }
    return {};
}

DorfContents parse_dorf(std::istream& in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        auto t = trim(line);
        if (!t.empty()) lines.push_back(std::move(t));
    }
    DorfContents out;
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::size_t start = i;
        CrfCurve curve;
        bool ok = i + 2 < lines.size() && !starts_with_key(lines[i], 'I') && !starts_with_key(lines[i + 1], 'I');
        if (ok) {
            curve.name = lines[i];
            i += 2;  // name, type
            ok = read_samples(lines, i, 'I', curve.irradiance) && read_samples(lines, i, 'B', curve.intensity);
        }
        if (!ok) {
            out.warnings.push_back("record " + std::to_string(out.curves.size() + out.warnings.size() + 1) +
                                   " (line " + std::to_string(start + 1) + " of non-empty lines) is malformed; skipped");
            // Resynchronize on the next record whose third line is an "I =" list.
            std::size_t next = start + 3;
            while (next < lines.size() && !starts_with_key(lines[next], 'I')) ++next;
            if (next >= lines.size()) break;
            i = next - 2;
            continue;
        }
        if (const std::string why = validate_curve(curve); !why.empty()) {
            out.warnings.push_back("curve '" + curve.name + "' skipped: " + why);
            continue;
        }
        out.curves.push_back(std::move(curve));
    }
    if (out.curves.empty()) throw std::runtime_error("DoRF input contains zero parseable curves");
    return out;
}

DorfContents load_dorf(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read DoRF file " + path.string());
    return parse_dorf(in);
}

void write_dorf(std::ostream& out, std::span<const CrfCurve> curves) {
    const auto flags = out.flags();
    out.precision(17);
    for (const auto& c : curves) {
        out << c.name << "\ngraph\nI =\n";
        for (std::size_t j = 0; j < c.irradiance.size(); ++j) out << (j ? " " : "") << c.irradiance[j];
        out << "\nB =\n";
        for (std::size_t j = 0; j < c.intensity.size(); ++j) out << (j ? " " : "") << c.intensity[j];
        out << "\n";
    }
    out.flags(flags);
}

CrfFit fit_gain(const CrfCurve& curve, const Algebra& algebra) {
    if (curve.irradiance.size() != curve.intensity.size() || curve.irradiance.empty()) {
        throw std::invalid_argument("fit_gain: invalid curve '" + curve.name + "'");
    }
    // Coarse scan over log10(gain) in [-6, 6], then golden-section refinement
    // in log space around the best grid point.
    constexpr double lo_exp = -6.0;
    constexpr double hi_exp = 6.0;
    constexpr int steps = 480;
    constexpr double h = (hi_exp - lo_exp) / steps;
    auto cost = [&](double log_gain) { return rmse_at(curve, algebra, std::pow(10.0, log_gain)); };

    int best = 0;
    double best_cost = cost(lo_exp);
    for (int s = 1; s <= steps; ++s) {
        const double c = cost(lo_exp + s * h);
        if (c < best_cost) {
            best_cost = c;
            best = s;
        }
    }
    double a = lo_exp + std::max(best - 1, 0) * h;
    double b = lo_exp + std::min(best + 1, steps) * h;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = cost(x1);
    double f2 = cost(x2);
    while (b - a > 1e-13) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = cost(x2);
        }
    }
    const double log_gain = 0.5 * (a + b);
    CrfFit fit{curve.name, std::pow(10.0, log_gain), cost(log_gain)};
    // Gain 0 (flat response at 0) is outside the log grid; keep it if it wins.
    if (const double zero = rmse_at(curve, algebra, 0.0); zero < fit.rmse) fit = {curve.name, 0.0, zero};
    return fit;
}

CrfCurve average_curve(std::span<const CrfCurve> curves) {
    if (curves.empty()) throw std::invalid_argument("average_curve: no curves");
    CrfCurve avg;
    avg.name = "average";
    avg.irradiance = curves.front().irradiance;
    avg.intensity.assign(avg.irradiance.size(), 0.0);
    for (const auto& c : curves) {
        for (std::size_t j = 0; j < avg.irradiance.size(); ++j) {
            avg.intensity[j] += interpolate(c.irradiance, c.intensity, avg.irradiance[j]);
        }
    }
    for (double& v : avg.intensity) v /= static_cast<double>(curves.size());
    return avg;
}

CrfReport compare_crf(std::span<const CrfCurve> curves, const Algebra& algebra) {
    if (curves.empty()) throw std::invalid_argument("compare_crf: no curves");
    CrfReport report;
    report.fits.reserve(curves.size());
    double total = 0.0;
    for (const auto& c : curves) {
        report.fits.push_back(fit_gain(c, algebra));
        total += report.fits.back().rmse;
        if (report.fits.back().rmse < report.fits[report.best].rmse) report.best = report.fits.size() - 1;
    }
    report.mean_rmse = total / static_cast<double>(curves.size());
    report.average = fit_gain(average_curve(curves), algebra);
    return report;
}

}  // namespace ltip
