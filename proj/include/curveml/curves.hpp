#pragma once

// Curve models over Q and their point counts modulo p.
//
// Elliptic curves use the reduced minimal model
//     y^2 + e1 x y + e2 y = x^3 + e3 x^2 + e4 x + e5
// and genus-2 curves the model y^2 + h(x) y = f(x) with deg f <= 6, deg h <= 3.

#include "curveml/decimal_int.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curveml {

struct EllipticCurveQ {
    std::string label;
    int e1 = 0;
    int e2 = 0;
    int e3 = 0;
    DecimalInt e4;
    DecimalInt e5;
    std::int64_t conductor = 1;
    std::optional<DecimalInt> discriminant_abs;

    /// Throws InputError naming the first violated field ("e1 out of range", ...).
    void validate() const;
};

struct Genus2CurveQ {
    std::string label;
    std::array<DecimalInt, 7> f;  // f[k] is the coefficient of x^k
    std::array<DecimalInt, 4> h;
    std::int64_t conductor = 1;
    DecimalInt discriminant_abs{1};

    void validate() const;

    /// p divides the model discriminant.
    bool is_bad_prime(std::uint32_t p) const noexcept { return discriminant_abs.residue(p) == 0; }
};

struct CurveLabels {
    std::int64_t rank = 0;
    std::int64_t torsion_order = 1;
    std::vector<std::int64_t> torsion_structure;  // cyclic factor orders; empty = unknown or trivial
    std::optional<std::int64_t> num_integral_points;
    std::optional<std::int64_t> num_rational_points;
    std::optional<double> sha_analytic_order;
    std::optional<bool> sha_is_trivial;

    void validate(bool elliptic) const;
};

/// Projective points of the reduced model over F_p, singular point included.
/// Throws std::invalid_argument when p is not prime.
std::uint64_t count_points_elliptic(const EllipticCurveQ& curve, std::uint32_t p);

/// p + 1 - #E(F_p), at good and bad primes alike.
std::int64_t ap_elliptic(const EllipticCurveQ& curve, std::uint32_t p);

/// Points over F_{p^k}, k in {1, 2}, for an odd prime of good reduction.
/// Throws std::invalid_argument for p = 2, for a bad prime, for other k, and
/// std::domain_error when the degree-6 and degree-5 coefficients of h^2 + 4f
/// both vanish mod p.
std::uint64_t count_points_genus2(const Genus2CurveQ& curve, std::uint32_t p, int extension_degree);

struct Genus2Euler {
    std::int64_t a1 = 0;
    std::int64_t a2 = 0;

    friend bool operator==(const Genus2Euler&, const Genus2Euler&) = default;
};

/// (a1, a2) of L_p(T) = 1 + a1 T + a2 T^2 + p a1 T^3 + p^2 T^4; (0, p) at bad primes.
Genus2Euler euler_pair_genus2(const Genus2CurveQ& curve, std::uint32_t p);

/// Coefficients of h(x)^2 + 4 f(x) reduced mod p, index = degree.
std::array<std::uint32_t, 7> genus2_square_completed(const Genus2CurveQ& curve, std::uint32_t p);

} // namespace curveml
