#pragma once

// Modular arithmetic over F_p and F_{p^2} for the point counters.
//
// Everything here works on primes well below 2^32 (the feature vectors never
// go past the 500th prime, 3571), so residues fit in 32 bits and products of
// two residues in 64. mod_pow alone accepts a general 64-bit modulus and
// widens to 128 bits for its products.

#include <cstdint>
#include <span>

namespace curveml {

std::uint64_t mod_pow(std::int64_t base, std::uint64_t exp, std::uint64_t m);

/// Representative of `a` in [0, m).
constexpr std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) noexcept {
    const auto sm = static_cast<std::int64_t>(m);
    const std::int64_t r = a % sm;
    return static_cast<std::uint64_t>(r < 0 ? r + sm : r);
}

bool is_prime(std::uint64_t n) noexcept;

/// Euler's criterion. Throws std::invalid_argument unless p is odd and >= 3;
/// primality of p is the caller's responsibility.
int legendre_symbol(std::int64_t a, std::uint64_t p);

/// Smallest quadratic non-residue in [2, p).
std::uint64_t find_non_residue(std::uint64_t p);

/// chi[a] = legendre_symbol(a, p) for a in [0, p), built by squaring and cached
/// per prime for the life of the process. Safe to call concurrently.
std::span<const std::int32_t> legendre_table(std::uint32_t p);

struct Fp2Elem {
    std::uint32_t a = 0;  // a + b*t
    std::uint32_t b = 0;

    friend constexpr bool operator==(Fp2Elem, Fp2Elem) = default;
};

/// F_p[t] / (t^2 - n) for an odd prime p and the smallest non-residue n.
class Fp2Field {
public:
    explicit Fp2Field(std::uint32_t p);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t non_residue() const noexcept { return n_; }

    Fp2Elem make(std::int64_t a, std::int64_t b) const noexcept {
        return {static_cast<std::uint32_t>(reduce_mod(a, p_)),
                static_cast<std::uint32_t>(reduce_mod(b, p_))};
    }

    Fp2Elem add(Fp2Elem u, Fp2Elem v) const noexcept {
        return {add_p(u.a, v.a), add_p(u.b, v.b)};
    }

    Fp2Elem mul(Fp2Elem u, Fp2Elem v) const noexcept {
        const std::uint64_t p = p_;
        const std::uint64_t bb = std::uint64_t{u.b} * v.b % p;
        const std::uint64_t re = (std::uint64_t{u.a} * v.a + bb * n_) % p;
        const std::uint64_t im = (std::uint64_t{u.a} * v.b + std::uint64_t{u.b} * v.a) % p;
        return {static_cast<std::uint32_t>(re), static_cast<std::uint32_t>(im)};
    }

    /// a^2 - n b^2, the field norm down to F_p.
    std::uint32_t norm(Fp2Elem u) const noexcept {
        const std::uint64_t p = p_;
        const std::uint64_t a2 = std::uint64_t{u.a} * u.a % p;
        const std::uint64_t nb2 = std::uint64_t{u.b} * u.b % p * n_ % p;
        return static_cast<std::uint32_t>((a2 + p - nb2) % p);
    }

private:
    std::uint32_t add_p(std::uint32_t x, std::uint32_t y) const noexcept {
        const std::uint32_t s = x + y;
        return s >= p_ ? s - p_ : s;
    }

    std::uint32_t p_;
    std::uint32_t n_;
};

/// Quadratic character of F_{p^2}: 0 at zero, else the Legendre symbol of the norm.
int chi_fp2(const Fp2Field& field, Fp2Elem u);

} // namespace curveml
