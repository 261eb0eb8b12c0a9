#include "curveml/ff_arith.hpp"
#include "curveml/simd/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace curveml;
using namespace curveml::simd;

namespace {

std::vector<const KernelTable*> variants() {
    std::vector<const KernelTable*> v{&scalar::table};
    if (isa_supported(Isa::avx2)) v.push_back(&kernels_for(Isa::avx2));
    return v;
}

std::vector<std::uint32_t> random_poly(std::mt19937_64& rng, std::uint32_t p, std::size_t degree) {
    std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
    std::vector<std::uint32_t> c(degree + 1);
    for (auto& x : c) x = d(rng);
    if (c.back() == 0) c.back() = 1;
    return c;
}

} // namespace

TEST_CASE("scalar F_p character sum equals a direct Legendre sum") {
    std::mt19937_64 rng(1);
    for (std::uint32_t p : {3u, 5u, 7u, 13u, 101u}) {
        const auto chi = legendre_table(p);
        for (std::size_t deg : {1u, 3u, 6u}) {
            const auto c = random_poly(rng, p, deg);
            std::int64_t want = 0;
            for (std::uint64_t x = 0; x < p; ++x) {
                std::uint64_t acc = 0;
                for (std::size_t k = c.size(); k-- > 0;) acc = (acc * x + c[k]) % p;
                want += legendre_symbol(static_cast<std::int64_t>(acc), p);
            }
            CHECK(scalar::table.char_sum_fp(c, p, chi.data()) == want);
        }
    }
}

TEST_CASE("ISA variants agree on integer kernels") {
    const auto vs = variants();
    std::mt19937_64 rng(2);
    for (std::uint32_t p : {3u, 5u, 11u, 97u, 541u, 1223u, 3571u, 16381u, 16411u}) {
        const auto chi = legendre_table(p);
        const auto n = static_cast<std::uint32_t>(find_non_residue(p));
        for (std::size_t deg : {0u, 2u, 5u, 6u}) {
            const auto c = random_poly(rng, p, deg);
            const auto ref = scalar::table.char_sum_fp(c, p, chi.data());
            for (const auto* k : vs) CHECK(k->char_sum_fp(c, p, chi.data()) == ref);
            if (p <= 1223) {
                const auto ref2 = scalar::table.char_sum_fp2(c, p, n, chi.data());
                for (const auto* k : vs) CHECK(k->char_sum_fp2(c, p, n, chi.data()) == ref2);
            }
        }
    }
}

TEST_CASE("ISA variants agree on floating-point kernels") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 2.0);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 101u}) {
        std::vector<double> x(n), y(n), m(n), iv(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = g(rng);
            y[i] = g(rng);
            m[i] = g(rng);
            iv[i] = std::fabs(g(rng)) + 0.1;
        }
        double dot = 0, dist = 0;
        for (std::size_t i = 0; i < n; ++i) {
            dot += x[i] * y[i];
            dist += (x[i] - m[i]) * (x[i] - m[i]) * iv[i];
        }
        for (const auto* k : variants()) {
            CHECK(k->dot(x.data(), y.data(), n) == doctest::Approx(dot).epsilon(1e-12));
            CHECK(k->weighted_sq_dist(x.data(), m.data(), iv.data(), n) == doctest::Approx(dist).epsilon(1e-12));
            auto out = y;
            k->axpy(0.5, x.data(), out.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(y[i] + 0.5 * x[i]));
        }
    }
}

TEST_CASE("active ISA can be switched") {
    const Isa before = kernels().isa;
    set_active_isa(Isa::scalar);
    CHECK(kernels().isa == Isa::scalar);
    if (isa_supported(Isa::avx2)) {
        set_active_isa(Isa::avx2);
        CHECK(kernels().isa == Isa::avx2);
    } else {
        CHECK_THROWS_AS(kernels_for(Isa::avx2), std::invalid_argument);
    }
    set_active_isa(before);
    CHECK(isa_name(Isa::scalar) == "scalar");
    CHECK(isa_name(Isa::avx2) == "avx2");
}
