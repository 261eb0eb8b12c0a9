#include "curveml/simd/kernels.hpp"

namespace curveml::simd::scalar {
namespace {

std::uint64_t horner_fp(std::span<const std::uint32_t> coeffs, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = (acc * x + coeffs[k]) % p;
    return acc;
}

std::int64_t char_sum_fp(std::span<const std::uint32_t> coeffs, std::uint32_t p,
                         const std::int32_t* chi) {
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) sum += chi[horner_fp(coeffs, x, p)];
    return sum;
}

// F has coefficients in F_p, so F(conj(x)) = conj(F(x)) and both share a norm:
// the rows b and p - b contribute equally.
std::int64_t char_sum_fp2(std::span<const std::uint32_t> coeffs, std::uint32_t p,
                          std::uint32_t n, const std::int32_t* chi) {
    const std::uint64_t P = p;
    std::int64_t sum = 0;
    for (std::uint64_t b = 0; b <= P / 2; ++b) {
        std::int64_t row = 0;
        for (std::uint64_t a = 0; a < P; ++a) {
            std::uint64_t re = 0, im = 0;
            for (std::size_t k = coeffs.size(); k-- > 0;) {
                const std::uint64_t nre = (re * a + im * b % P * n + coeffs[k]) % P;
                const std::uint64_t nim = (re * b + im * a) % P;
                re = nre;
                im = nim;
            }
            const std::uint64_t norm = (re * re + (P - im * im % P) * n) % P;
            row += chi[norm];
        }
        sum += b == 0 ? row : 2 * row;
    }
    return sum;
}

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double weighted_sq_dist(const double* x, const double* mean, const double* inv_var, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean[i];
        s += d * d * inv_var[i];
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace

const KernelTable table{Isa::scalar, char_sum_fp, char_sum_fp2, dot, weighted_sq_dist, axpy};

} // namespace curveml::simd::scalar
