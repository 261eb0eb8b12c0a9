#include "curveml/ff_arith.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace curveml {

std::uint64_t mod_pow(std::int64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
    unsigned __int128 result = 1;
    unsigned __int128 b = reduce_mod(base, m);
    while (exp != 0) {
        if (exp & 1u) result = result * b % m;
        b = b * b % m;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

int legendre_symbol(std::int64_t a, std::uint64_t p) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("legendre_symbol: p must be an odd prime, got " + std::to_string(p));
    const std::uint64_t r = mod_pow(a, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

std::uint64_t find_non_residue(std::uint64_t p) {
    for (std::uint64_t n = 2; n < p; ++n)
        if (legendre_symbol(static_cast<std::int64_t>(n), p) == -1) return n;
    throw std::invalid_argument("find_non_residue: no non-residue below " + std::to_string(p));
}

std::span<const std::int32_t> legendre_table(std::uint32_t p) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("legendre_table: p must be an odd prime, got " + std::to_string(p));
    static std::mutex mu;
    static std::map<std::uint32_t, std::unique_ptr<const std::vector<std::int32_t>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[p];
    if (!slot) {
        auto table = std::make_unique<std::vector<std::int32_t>>(p, -1);
        (*table)[0] = 0;
        for (std::uint64_t y = 1; y <= p / 2; ++y) (*table)[y * y % p] = 1;
        slot = std::move(table);
    }
    return *slot;
}

Fp2Field::Fp2Field(std::uint32_t p)
    : p_(p), n_(static_cast<std::uint32_t>(find_non_residue(p))) {}

int chi_fp2(const Fp2Field& field, Fp2Elem u) {
    if (u.a == 0 && u.b == 0) return 0;
    return legendre_symbol(field.norm(u), field.p());
}

} // namespace curveml
