#pragma once

// Data-parallel inner loops, one scalar reference implementation plus
// ISA-specific variants selected at runtime. Every variant of an integer
// kernel returns bit-identical results; the floating-point kernels agree with
// the reference up to summation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace curveml::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Highest-degree coefficient a polynomial passed to the character sums may have.
inline constexpr std::size_t kMaxPolyDegree = 6;

struct KernelTable {
    Isa isa;

    /// sum over x in F_p of chi[F(x)], F given by residues coeffs[k] (coefficient
    /// of x^k, all < p). chi has p entries in {-1, 0, 1}.
    std::int64_t (*char_sum_fp)(std::span<const std::uint32_t> coeffs, std::uint32_t p,
                                const std::int32_t* chi);

    /// sum over x in F_{p^2} = F_p[t]/(t^2 - n) of chi[norm(F(x))], F with
    /// coefficients in F_p. chi is the F_p Legendre table, indexed by the norm.
    std::int64_t (*char_sum_fp2)(std::span<const std::uint32_t> coeffs, std::uint32_t p,
                                 std::uint32_t n, const std::int32_t* chi);

    double (*dot)(const double* x, const double* y, std::size_t n);

    /// sum_i (x_i - mean_i)^2 * inv_var_i
    double (*weighted_sq_dist)(const double* x, const double* mean, const double* inv_var,
                               std::size_t n);

    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;

/// Kernel set for a specific ISA; throws std::invalid_argument when the CPU
/// lacks it.
const KernelTable& kernels_for(Isa isa);

/// Kernels in use. Picks the widest supported ISA on first call unless
/// CURVEML_ISA=scalar|avx2 is set in the environment.
const KernelTable& kernels();

/// Override the active kernel set (tests and the --isa CLI flag).
void set_active_isa(Isa isa);

namespace scalar {
extern const KernelTable table;
}

#if defined(CURVEML_HAVE_AVX2_TU)
namespace avx2 {
extern const KernelTable table;
}
#endif

} // namespace curveml::simd
