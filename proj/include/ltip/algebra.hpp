#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ltip {

/// Margin kept between normalized intensities and the pole of the generative
/// function at 1. Input white (255/255, 65535/65535) is stored as 1 - kClampMargin.
inline constexpr double kClampMargin = 1.0 / 1048576.0;  // 2^-20

/// Largest representable double strictly below one. Results of the bounded
/// algebras never exceed it.
inline constexpr double kBelowOne = 1.0 - 1.0 / 9007199254740992.0;  // 1 - 2^-53

/// Clamp a normalized intensity into [0, 1 - kClampMargin].
double clamp_to_domain(double x) noexcept;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Model {
    ltip,
    classical_lip,
    parametric_ltip,
    real_baseline,
};

std::string_view to_string(Model model) noexcept;

/// Parses "ltip", "lip", "parametric" or "real". Throws std::invalid_argument.
Model parse_model(std::string_view name);

/// A logarithmic-type image algebra: a generative function phi carrying the
/// bounded gray-tone domain onto the reals, its inverse, and the induced
/// addition and scalar multiplication.
///
/// Bounded models work on [0, 1). The extended forms accept the negative
/// values that show up in band-pass coefficients:
///   ltip / parametric: phi on (-inf, 1), phi_inv on (-1, +inf)
///   classical_lip:     phi on (-inf, D), phi_inv on all reals
/// real_baseline is ordinary arithmetic and is unbounded.
class Algebra {
public:
    static Algebra ltip() noexcept;
    /// Gray-tone LIP with upper bound D (D = 1 for normalized images).
    static Algebra classical_lip(double upper_bound = 1.0);
    static Algebra parametric(double exponent);
    static Algebra real_baseline() noexcept;

    Algebra() noexcept = default;

    Model model() const noexcept { return model_; }
    double exponent() const noexcept { return exponent_; }
    double upper_bound() const noexcept { return upper_bound_; }
    bool bounded() const noexcept { return model_ != Model::real_baseline; }

    /// Generative function on the gray-tone domain [0, 1). Throws DomainError.
    double phi(double x) const;
    /// Inverse generative function for y >= 0. Throws DomainError for y < 0.
    double phi_inv(double y) const;

    /// phi on the extended domain (negative gray tones allowed).
    double phi_extended(double x) const;
    /// phi_inv on the extended range. Throws DomainError for y <= -1 on the
    /// ltip family.
    double phi_inv_extended(double y) const;

    /// u (+) v using the closed form of the model.
    double add(double u, double v) const;
    /// alpha (x) u using the closed form of the model. alpha >= 0.
    double scalar_multiply(double alpha, double u) const;
    /// Pullback of real subtraction: phi_inv_extended(phi(u) - phi(v)).
    double subtract(double u, double v) const;

    std::string describe() const;

    friend bool operator==(const Algebra&, const Algebra&) = default;

private:
    Algebra(Model model, double exponent, double upper_bound) noexcept
        : model_(model), exponent_(exponent), upper_bound_(upper_bound) {}

    void check_pixel(double x, const char* op) const;
    double guard(double x) const noexcept;

    Model model_ = Model::ltip;
    double exponent_ = 1.0;
    double upper_bound_ = 1.0;
};

/// Photoreceptor response parameters: semisaturation I_S and exponent n.
struct HvsParams {
    double semisaturation = 1.0;
    double exponent = 1.0;
};

/// r(I) = I^n / (I^n + I_S^n).
double michaelis_menten(double intensity, const HvsParams& params);

/// r(I) = I / (I + I_S), the n = 1 case.
double naka_rushton(double intensity, double semisaturation);

}  // namespace ltip
