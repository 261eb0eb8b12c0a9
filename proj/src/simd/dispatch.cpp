#include "curveml/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace curveml::simd {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(CURVEML_HAVE_AVX2_TU)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa))
        throw std::invalid_argument("ISA not supported on this CPU: " + std::string(isa_name(isa)));
#if defined(CURVEML_HAVE_AVX2_TU)
    if (isa == Isa::avx2) return avx2::table;
#endif
    return scalar::table;
}

namespace {

const KernelTable* pick_default() {
    if (const char* env = std::getenv("CURVEML_ISA")) {
        const std::string_view v(env);
        if (v == "scalar") return &scalar::table;
        if (v == "avx2" && isa_supported(Isa::avx2)) return &kernels_for(Isa::avx2);
    }
    if (isa_supported(Isa::avx2)) return &kernels_for(Isa::avx2);
    return &scalar::table;
}

std::atomic<const KernelTable*> g_active{nullptr};

} // namespace

const KernelTable& kernels() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        const KernelTable* expected = nullptr;
        t = pick_default();
        if (!g_active.compare_exchange_strong(expected, t, std::memory_order_acq_rel)) t = expected;
    }
    return *t;
}

void set_active_isa(Isa isa) {
    g_active.store(&kernels_for(isa), std::memory_order_release);
}

} // namespace curveml::simd
