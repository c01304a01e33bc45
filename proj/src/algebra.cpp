#include "ltip/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltip {

namespace {

double signed_pow(double x, double p) {
    return x < 0.0 ? -std::pow(-x, p) : std::pow(x, p);
}

[[noreturn]] void domain_failure(const char* op, double value, const char* expected) {
    std::ostringstream os;
    os << op << ": argument " << value << " outside " << expected;
    throw DomainError(os.str());
}

}  // namespace

double clamp_to_domain(double x) noexcept {
    if (!(x > 0.0)) return 0.0;  // also maps NaN to 0
    return std::min(x, 1.0 - kClampMargin);
}

std::string_view to_string(Model model) noexcept {
    switch (model) {
        case Model::ltip: return "ltip";
        case Model::classical_lip: return "lip";
        case Model::parametric_ltip: return "parametric";
        case Model::real_baseline: return "real";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    if (name == "ltip") return Model::ltip;
    if (name == "lip") return Model::classical_lip;
    if (name == "parametric") return Model::parametric_ltip;
    if (name == "real") return Model::real_baseline;
    throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected ltip|lip|parametric|real)");
}

Algebra Algebra::ltip() noexcept { return {Model::ltip, 1.0, 1.0}; }

Algebra Algebra::classical_lip(double upper_bound) {
    if (!(upper_bound > 0.0) || !std::isfinite(upper_bound))
        throw std::invalid_argument("LIP upper bound must be positive and finite");
    return {Model::classical_lip, 1.0, upper_bound};
}

Algebra Algebra::parametric(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw std::invalid_argument("parametric exponent m must be positive and finite");
    return {Model::parametric_ltip, exponent, 1.0};
}

Algebra Algebra::real_baseline() noexcept { return {Model::real_baseline, 1.0, 1.0}; }

void Algebra::check_pixel(double x, const char* op) const {
    if (model_ == Model::real_baseline) {
        if (!std::isfinite(x)) domain_failure(op, x, "the finite reals");
        return;
    }
    if (!(x >= 0.0 && x < upper_bound_)) {
        domain_failure(op, x, model_ == Model::classical_lip ? "[0, D)" : "[0, 1)");
    }
}

double Algebra::guard(double x) const noexcept {
    if (model_ == Model::real_baseline) return x;
    const double ceiling = upper_bound_ == 1.0 ? kBelowOne : std::nextafter(upper_bound_, 0.0);
    return std::min(x, ceiling);
}

double Algebra::phi(double x) const {
    check_pixel(x, "phi");
    return phi_extended(x);
}

double Algebra::phi_extended(double x) const {
    switch (model_) {
        case Model::ltip:
            if (!(x < 1.0)) domain_failure("phi", x, "(-inf, 1)");
            return x / (1.0 - x);
        case Model::parametric_ltip: {
            if (!(x < 1.0)) domain_failure("phi", x, "(-inf, 1)");
            const double t = signed_pow(x, exponent_);
            return t / (1.0 - t);
        }
        case Model::classical_lip:
            if (!(x < upper_bound_)) domain_failure("phi", x, "(-inf, D)");
            return -upper_bound_ * std::log1p(-x / upper_bound_);
        case Model::real_baseline:
            return x;
    }
    return x;
}

double Algebra::phi_inv(double y) const {
    if (model_ != Model::real_baseline && !(y >= 0.0)) domain_failure("phi_inv", y, "[0, +inf)");
    return phi_inv_extended(y);
}

double Algebra::phi_inv_extended(double y) const {
    if (std::isnan(y)) domain_failure("phi_inv", y, "the reals");
    switch (model_) {
        case Model::ltip:
            if (!(y > -1.0)) domain_failure("phi_inv", y, "(-1, +inf)");
            return guard(y / (y + 1.0));
        case Model::parametric_ltip:
            if (!(y > -1.0)) domain_failure("phi_inv", y, "(-1, +inf)");
            return guard(signed_pow(y / (y + 1.0), 1.0 / exponent_));
        case Model::classical_lip:
            return guard(-upper_bound_ * std::expm1(-y / upper_bound_));
        case Model::real_baseline:
            return y;
    }
    return y;
}

double Algebra::add(double u, double v) const {
    check_pixel(u, "add");
    check_pixel(v, "add");
    switch (model_) {
        case Model::ltip:
            return guard(1.0 - (1.0 - u) * (1.0 - v) / (1.0 - u * v));
        case Model::parametric_ltip: {
            const double um = std::pow(u, exponent_);
            const double vm = std::pow(v, exponent_);
            return guard(std::pow(1.0 - (1.0 - um) * (1.0 - vm) / (1.0 - um * vm), 1.0 / exponent_));
        }
        case Model::classical_lip:
            return guard(u + v - u * v / upper_bound_);
        case Model::real_baseline:
            return u + v;
    }
    return u + v;
}

double Algebra::scalar_multiply(double alpha, double u) const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) domain_failure("scalar_multiply", alpha, "[0, +inf)");
    check_pixel(u, "scalar_multiply");
    switch (model_) {
        case Model::ltip:
            return guard(alpha * u / (1.0 + (alpha - 1.0) * u));
        case Model::parametric_ltip: {
            const double um = std::pow(u, exponent_);
            return guard(u * std::pow(alpha / (1.0 + (alpha - 1.0) * um), 1.0 / exponent_));
        }
        case Model::classical_lip:
            // D - D (1 - u/D)^alpha, evaluated without cancellation near u = 0
            return guard(-upper_bound_ * std::expm1(alpha * std::log1p(-u / upper_bound_)));
        case Model::real_baseline:
            return alpha * u;
    }
    return alpha * u;
}

double Algebra::subtract(double u, double v) const {
    return phi_inv_extended(phi(u) - phi(v));
}

std::string Algebra::describe() const {
    std::ostringstream os;
    os << to_string(model_);
    if (model_ == Model::parametric_ltip) os << "(m=" << exponent_ << ")";
    if (model_ == Model::classical_lip) os << "(D=" << upper_bound_ << ")";
    return os.str();
}

double michaelis_menten(double intensity, const HvsParams& params) {
    if (!(intensity >= 0.0)) domain_failure("michaelis_menten", intensity, "[0, +inf)");
    if (!(params.semisaturation > 0.0) || !(params.exponent > 0.0))
        throw std::invalid_argument("michaelis_menten: semisaturation and exponent must be positive");
    const double a = std::pow(intensity, params.exponent);
    const double b = std::pow(params.semisaturation, params.exponent);
    return std::min(a / (a + b), kBelowOne);
}

double naka_rushton(double intensity, double semisaturation) {
    if (!(intensity >= 0.0)) domain_failure("naka_rushton", intensity, "[0, +inf)");
    if (!(semisaturation > 0.0)) throw std::invalid_argument("naka_rushton: semisaturation must be positive");
    return std::min(intensity / (intensity + semisaturation), kBelowOne);
}

}  // namespace ltip
