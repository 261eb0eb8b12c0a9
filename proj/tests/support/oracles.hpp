#pragma once

// Brute-force reference counts, written without the library's field code.
// F_{p^2} here is F_p[s]/(s^2 + c1 s + c0) for the first irreducible monic
// quadratic found by search, a different model from the library's t^2 = n.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

inline std::int64_t md(std::int64_t a, std::int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

/// Projective points of y^2 + e1 xy + e2 y = x^3 + e3 x^2 + e4 x + e5 over F_p.
inline std::uint64_t elliptic_count(const std::array<std::int64_t, 5>& e, std::int64_t p) {
    std::uint64_t n = 1;
    const std::int64_t e1 = md(e[0], p), e2 = md(e[1], p), e3 = md(e[2], p), e4 = md(e[3], p), e5 = md(e[4], p);
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y) {
            const std::int64_t lhs = md(y * y + e1 * x % p * y + e2 * y, p);
            const std::int64_t rhs = md(x * x % p * x + e3 * x % p * x + e4 * x + e5, p);
            if (lhs == rhs) ++n;
        }
    return n;
}

struct Quad {
    std::int64_t p, c1, c0;  // s^2 = -c1 s - c0

    static Quad find(std::int64_t p) {
        for (std::int64_t c1 = 1; c1 < p; ++c1)
            for (std::int64_t c0 = 1; c0 < p; ++c0) {
                bool root = false;
                for (std::int64_t x = 0; x < p && !root; ++x) root = md(x * x + c1 * x + c0, p) == 0;
                if (!root) return {p, c1, c0};
            }
        throw std::logic_error("no irreducible quadratic");
    }
};

struct E2 {
    std::int64_t u = 0, v = 0;  // u + v s
};

inline E2 add(const Quad& q, E2 a, E2 b) { return {md(a.u + b.u, q.p), md(a.v + b.v, q.p)}; }

inline E2 mul(const Quad& q, E2 a, E2 b) {
    // (a.u + a.v s)(b.u + b.v s) with s^2 = -c1 s - c0
    const std::int64_t vv = md(a.v * b.v, q.p);
    return {md(a.u * b.u - vv * q.c0, q.p), md(a.u * b.v + a.v * b.u - vv * q.c1, q.p)};
}

inline bool eq(E2 a, E2 b) { return a.u == b.u && a.v == b.v; }

inline E2 eval(const Quad& q, const std::vector<std::int64_t>& coeffs, E2 x) {
    E2 acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = add(q, mul(q, acc, x), E2{md(*it, q.p), 0});
    return acc;
}

/// Points of y^2 + h(x) y = f(x) over F_{p^k}, k in {1, 2}, on the smooth model
/// in weighted projective space: affine pairs by enumeration, plus the roots Y
/// of Y^2 + h3 Y - f6 = 0 at infinity.
inline std::uint64_t genus2_count(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& h,
                                  std::int64_t p, int k) {
    const Quad q = k == 2 ? Quad::find(p) : Quad{p, 0, 0};
    std::vector<E2> field;
    for (std::int64_t u = 0; u < p; ++u)
        for (std::int64_t v = 0; v < (k == 2 ? p : 1); ++v) field.push_back({u, v});
    std::uint64_t n = 0;
    for (const E2 x : field) {
        const E2 hx = eval(q, h, x), fx = eval(q, f, x);
        for (const E2 y : field)
            if (eq(add(q, mul(q, y, y), mul(q, hx, y)), fx)) ++n;
    }
    const E2 h3{md(h.size() > 3 ? h[3] : 0, p), 0}, f6{md(f.size() > 6 ? f[6] : 0, p), 0};
    for (const E2 y : field)
        if (eq(add(q, mul(q, y, y), mul(q, h3, y)), f6)) ++n;
    return n;
}

} // namespace oracle
