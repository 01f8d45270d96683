#include <cstdlib>
#include <string>

#include "scc/common/error.hpp"
#include "scc/simd/kernels.hpp"

namespace scc::simd {

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "?";
}

namespace {

bool cpu_supports(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(SCC_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(SCC_HAVE_NEON_KERNELS)
            return true;  // mandatory on aarch64
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* table_pointer(Isa isa) {
    switch (isa) {
        case Isa::scalar: return &detail::scalar_table;
        case Isa::avx2:
#if defined(SCC_HAVE_AVX2_KERNELS)
            return &detail::avx2_table;
#else
            return nullptr;
#endif
        case Isa::neon:
#if defined(SCC_HAVE_NEON_KERNELS)
            return &detail::neon_table;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable& select_active() {
    if (const char* forced = std::getenv("SCC_SIMD"); forced != nullptr && *forced != '\0') {
        const std::string_view name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == to_string(isa)) return kernels_for(isa);
        }
        throw UsageError("SCC_SIMD: unknown kernel variant \"" + std::string(name) + "\"");
    }
    const auto isas = available_isas();
    return kernels_for(isas.back());
}

}  // namespace

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (table_pointer(isa) != nullptr && cpu_supports(isa)) out.push_back(isa);
    }
    return out;
}

const KernelTable& kernels_for(Isa isa) {
    const KernelTable* table = table_pointer(isa);
    if (table == nullptr || !cpu_supports(isa)) {
        throw UsageError("kernel variant " + std::string(to_string(isa)) + " is not available");
    }
    return *table;
}

const KernelTable& active() {
    static const KernelTable& table = select_active();
    return table;
}

namespace {
void require_same(std::size_t a, std::size_t b) {
    if (a != b) throw UsageError("vector length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}
}  // namespace

double squared_l2(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size());
    return active().squared_l2_f64(a.data(), b.data(), a.size());
}

double squared_l2(std::span<const float> a, std::span<const float> b) {
    require_same(a.size(), b.size());
    return active().squared_l2_f32(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same(x.size(), y.size());
    active().axpy_f64(alpha, x.data(), y.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size());
    return active().dot_f64(a.data(), b.data(), a.size());
}

}  // namespace scc::simd
