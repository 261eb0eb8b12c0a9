#include "curveml/curves.hpp"

#include "curveml/error.hpp"
#include "curveml/ff_arith.hpp"
#include "curveml/simd/kernels.hpp"

#include <stdexcept>
#include <string>

namespace curveml {

namespace {

void require_prime(std::uint32_t p, const char* who) {
    if (!is_prime(p)) throw std::invalid_argument(std::string(who) + ": " + std::to_string(p) + " is not prime");
}

std::uint32_t red(std::int64_t v, std::uint32_t p) { return static_cast<std::uint32_t>(reduce_mod(v, p)); }

} // namespace

void EllipticCurveQ::validate() const {
    if (e1 != 0 && e1 != 1) throw InputError("e1 out of range (expected 0 or 1): " + std::to_string(e1));
    if (e2 < -1 || e2 > 1) throw InputError("e2 out of range (expected -1, 0 or 1): " + std::to_string(e2));
    if (e3 < -1 || e3 > 1) throw InputError("e3 out of range (expected -1, 0 or 1): " + std::to_string(e3));
    if (conductor < 1) throw InputError("conductor must be positive");
    if (discriminant_abs && (discriminant_abs->negative() || discriminant_abs->is_zero()))
        throw InputError("discriminant_abs must be positive");
}

void Genus2CurveQ::validate() const {
    if (conductor < 1) throw InputError("conductor must be positive");
    if (discriminant_abs.negative() || discriminant_abs.is_zero())
        throw InputError("discriminant_abs must be positive");
}

void CurveLabels::validate(bool elliptic) const {
    if (rank < 0) throw InputError("rank must be non-negative");
    if (torsion_order < 1) throw InputError("torsion_order must be positive");
    if (elliptic && torsion_order > 16) throw InputError("elliptic torsion_order exceeds 16");
    if (!torsion_structure.empty()) {
        std::int64_t product = 1;
        for (auto f : torsion_structure) {
            if (f < 1) throw InputError("torsion_structure factors must be positive");
            product *= f;
        }
        if (product != torsion_order)
            throw InputError("torsion_structure product " + std::to_string(product) +
                             " does not match torsion_order " + std::to_string(torsion_order));
    }
    if (num_integral_points && *num_integral_points < 0) throw InputError("num_integral_points must be non-negative");
    if (num_rational_points && *num_rational_points < 0) throw InputError("num_rational_points must be non-negative");
    if (sha_analytic_order && !(*sha_analytic_order > 0)) throw InputError("sha_analytic_order must be positive");
}

std::uint64_t count_points_elliptic(const EllipticCurveQ& curve, std::uint32_t p) {
    require_prime(p, "count_points_elliptic");
    const std::int64_t e1 = curve.e1, e2 = curve.e2, e3 = curve.e3;
    if (p == 2) {
        const std::uint32_t a4 = curve.e4.residue(2), a6 = curve.e5.residue(2);
        std::uint64_t affine = 0;
        for (std::int64_t x = 0; x < 2; ++x)
            for (std::int64_t y = 0; y < 2; ++y) {
                const std::int64_t lhs = y * y + e1 * x * y + e2 * y;
                const std::int64_t rhs = x * x * x + e3 * x * x + a4 * x + a6;
                if (reduce_mod(lhs - rhs, 2) == 0) ++affine;
            }
        return affine + 1;
    }
    // (2y + e1 x + e2)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    const std::uint64_t P = p;
    const std::uint64_t e4 = curve.e4.residue(p), e5 = curve.e5.residue(p);
    const std::array<std::uint32_t, 4> r{
        static_cast<std::uint32_t>((red(e2 * e2, p) + 4 * e5) % P),
        static_cast<std::uint32_t>((red(2 * e1 * e2, p) + 4 * e4) % P),
        red(e1 * e1 + 4 * e3, p),
        red(4, p),
    };
    const std::int64_t s = simd::kernels().char_sum_fp(r, p, legendre_table(p).data());
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + s) + 1;
}

std::int64_t ap_elliptic(const EllipticCurveQ& curve, std::uint32_t p) {
    return static_cast<std::int64_t>(p) + 1 - static_cast<std::int64_t>(count_points_elliptic(curve, p));
}

std::array<std::uint32_t, 7> genus2_square_completed(const Genus2CurveQ& curve, std::uint32_t p) {
    const std::uint64_t P = p;
    std::array<std::uint64_t, 4> h{};
    for (std::size_t i = 0; i < 4; ++i) h[i] = curve.h[i].residue(p);
    std::array<std::uint32_t, 7> out{};
    for (std::size_t k = 0; k < 7; ++k) {
        std::uint64_t c = 4 * std::uint64_t{curve.f[k].residue(p)} % P;
        for (std::size_t i = 0; i < 4; ++i)
            if (k >= i && k - i < 4) c = (c + h[i] * h[k - i]) % P;
        out[k] = static_cast<std::uint32_t>(c);
    }
    return out;
}

std::uint64_t count_points_genus2(const Genus2CurveQ& curve, std::uint32_t p, int extension_degree) {
    if (p == 2 || p % 2 == 0) throw std::invalid_argument("count_points_genus2: p must be odd");
    require_prime(p, "count_points_genus2");
    if (extension_degree != 1 && extension_degree != 2)
        throw std::invalid_argument("count_points_genus2: extension degree must be 1 or 2");
    if (curve.is_bad_prime(p))
        throw std::invalid_argument("count_points_genus2: " + std::to_string(p) + " is a bad prime for " + curve.label);

    const auto F = genus2_square_completed(curve, p);
    const auto chi = legendre_table(p);
    const auto& k = simd::kernels();
    const std::uint64_t P = p;

    std::uint64_t at_infinity = 0;
    if (F[6] != 0) {
        // every element of F_p is a square in F_{p^2}
        at_infinity = (extension_degree == 2 || chi[F[6]] == 1) ? 2 : 0;
    } else if (F[5] != 0) {
        at_infinity = 1;
    } else {
        throw std::domain_error("count_points_genus2: degenerate leading form mod " + std::to_string(p) + " for " +
                                curve.label);
    }

    if (extension_degree == 1) {
        const std::int64_t s = k.char_sum_fp(F, p, chi.data());
        return static_cast<std::uint64_t>(static_cast<std::int64_t>(P) + s) + at_infinity;
    }
    const Fp2Field field(p);
    const std::int64_t s = k.char_sum_fp2(F, p, field.non_residue(), chi.data());
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(P * P) + s) + at_infinity;
}

Genus2Euler euler_pair_genus2(const Genus2CurveQ& curve, std::uint32_t p) {
    if (p == 2) throw std::invalid_argument("euler_pair_genus2: p = 2 is never requested");
    if (curve.is_bad_prime(p)) return {0, static_cast<std::int64_t>(p)};
    const auto P = static_cast<std::int64_t>(p);
    const auto n1 = static_cast<std::int64_t>(count_points_genus2(curve, p, 1));
    const auto n2 = static_cast<std::int64_t>(count_points_genus2(curve, p, 2));
    const std::int64_t a1 = n1 - P - 1;
    const std::int64_t twice_a2 = n2 - P * P - 1 + a1 * a1;
    if (twice_a2 % 2 != 0)
        throw std::logic_error("euler_pair_genus2: odd 2*a2 for " + curve.label + " at p=" + std::to_string(p));
    return {a1, twice_a2 / 2};
}

} // namespace curveml
