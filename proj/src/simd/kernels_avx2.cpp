#include "curveml/simd/kernels.hpp"

#include <immintrin.h>

// Compiled with -mavx2 -mfma; never call into this file without checking
// isa_supported(Isa::avx2) first.

namespace curveml::simd::avx2 {
namespace {

// Reduction of 32-bit lanes modulo a broadcast p < 2^14 via a single-precision
// quotient estimate. For x < 3p^2 the estimate is off by at most one, so the
// remainder lands in [-p, 2p) and one conditional correction each way fixes it.
struct ModP {
    __m256i p;
    __m256i p_minus_1;
    __m256 inv;

    explicit ModP(std::uint32_t prime)
        : p(_mm256_set1_epi32(static_cast<int>(prime))),
          p_minus_1(_mm256_set1_epi32(static_cast<int>(prime) - 1)),
          inv(_mm256_set1_ps(1.0f / static_cast<float>(prime))) {}

    __m256i reduce(__m256i x) const {
        const __m256 q_est = _mm256_mul_ps(_mm256_cvtepi32_ps(x), inv);
        const __m256i q = _mm256_cvttps_epi32(q_est);
        __m256i r = _mm256_sub_epi32(x, _mm256_mullo_epi32(q, p));
        r = _mm256_add_epi32(r, _mm256_and_si256(_mm256_cmpgt_epi32(_mm256_setzero_si256(), r), p));
        r = _mm256_sub_epi32(r, _mm256_and_si256(_mm256_cmpgt_epi32(r, p_minus_1), p));
        return r;
    }
};

std::int64_t hsum_epi32(__m256i v) {
    alignas(32) std::int32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    std::int64_t s = 0;
    for (std::int32_t l : lanes) s += l;
    return s;
}

inline __m256i lane_offsets() { return _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7); }

// Above this the float quotient estimate in ModP is no longer tight enough.
constexpr std::uint32_t kMaxPrime = 1u << 14;

std::int64_t char_sum_fp(std::span<const std::uint32_t> coeffs, std::uint32_t p,
                         const std::int32_t* chi) {
    if (p >= kMaxPrime) return scalar::table.char_sum_fp(coeffs, p, chi);
    const ModP mod(p);
    const __m256i step = _mm256_set1_epi32(8);
    __m256i x = lane_offsets();
    __m256i acc_sum = _mm256_setzero_si256();
    for (std::uint32_t x0 = 0; x0 < p; x0 += 8) {
        const __m256i valid = _mm256_cmpgt_epi32(mod.p, x);
        const __m256i xs = _mm256_and_si256(x, valid);  // out-of-range lanes evaluate at 0
        __m256i v = _mm256_setzero_si256();
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            v = _mm256_add_epi32(_mm256_mullo_epi32(v, xs), _mm256_set1_epi32(static_cast<int>(coeffs[k])));
            v = mod.reduce(v);
        }
        const __m256i c = _mm256_i32gather_epi32(chi, v, 4);
        acc_sum = _mm256_add_epi32(acc_sum, _mm256_and_si256(c, valid));
        x = _mm256_add_epi32(x, step);
    }
    return hsum_epi32(acc_sum);
}

// Lanes run over a in x = a + b*t for a fixed row b; rows b and p - b are
// conjugate and share every norm, so only b <= (p-1)/2 is visited.
std::int64_t char_sum_fp2(std::span<const std::uint32_t> coeffs, std::uint32_t p,
                          std::uint32_t n, const std::int32_t* chi) {
    if (p >= kMaxPrime) return scalar::table.char_sum_fp2(coeffs, p, n, chi);
    const ModP mod(p);
    const __m256i nv = _mm256_set1_epi32(static_cast<int>(n));
    const __m256i step = _mm256_set1_epi32(8);
    __m256i row0 = _mm256_setzero_si256();
    __m256i rows = _mm256_setzero_si256();
    for (std::uint32_t b = 0; b <= p / 2; ++b) {
        const __m256i bv = _mm256_set1_epi32(static_cast<int>(b));
        const __m256i nb = _mm256_set1_epi32(static_cast<int>(std::uint64_t{n} * b % p));
        __m256i row = _mm256_setzero_si256();
        __m256i a = lane_offsets();
        for (std::uint32_t a0 = 0; a0 < p; a0 += 8) {
            const __m256i valid = _mm256_cmpgt_epi32(mod.p, a);
            const __m256i as = _mm256_and_si256(a, valid);
            __m256i re = _mm256_setzero_si256();
            __m256i im = _mm256_setzero_si256();
            for (std::size_t k = coeffs.size(); k-- > 0;) {
                const __m256i c = _mm256_set1_epi32(static_cast<int>(coeffs[k]));
                const __m256i nre = _mm256_add_epi32(
                    _mm256_add_epi32(_mm256_mullo_epi32(re, as), _mm256_mullo_epi32(im, nb)), c);
                const __m256i nim = _mm256_add_epi32(_mm256_mullo_epi32(re, bv), _mm256_mullo_epi32(im, as));
                re = mod.reduce(nre);
                im = mod.reduce(nim);
            }
            const __m256i im2 = mod.reduce(_mm256_mullo_epi32(im, im));
            const __m256i neg_nim2 = _mm256_mullo_epi32(_mm256_sub_epi32(mod.p, im2), nv);
            const __m256i norm = mod.reduce(_mm256_add_epi32(_mm256_mullo_epi32(re, re), neg_nim2));
            const __m256i c = _mm256_i32gather_epi32(chi, norm, 4);
            row = _mm256_add_epi32(row, _mm256_and_si256(c, valid));
            a = _mm256_add_epi32(a, step);
        }
        if (b == 0) row0 = row;
        else rows = _mm256_add_epi32(rows, row);
    }
    return hsum_epi32(row0) + 2 * hsum_epi32(rows);
}

double hsum_pd(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
    }
    for (; i + 4 <= n; i += 4)
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    double s = hsum_pd(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double weighted_sq_dist(const double* x, const double* mean, const double* inv_var, std::size_t n) {
    __m256d s = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i));
        s = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(inv_var + i), s);
    }
    double r = hsum_pd(s);
    for (; i < n; ++i) {
        const double d = x[i] - mean[i];
        r += d * d * inv_var[i];
    }
    return r;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace

const KernelTable table{Isa::avx2, char_sum_fp, char_sum_fp2, dot, weighted_sq_dist, axpy};

} // namespace curveml::simd::avx2
