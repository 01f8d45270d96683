#pragma once

// Data-parallel inner loops used by whitening and nearest-neighbour search.
//
// Every kernel has a scalar reference implementation; vector variants are
// compiled per ISA and chosen once at runtime. Setting SCC_SIMD=scalar (or
// avx2 / neon) in the environment forces a variant.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace scc::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    /// sum_i (a[i] - b[i])^2
    double (*squared_l2_f64)(const double* a, const double* b, std::size_t n);
    /// Same over single precision inputs, accumulated in double.
    double (*squared_l2_f32)(const float* a, const float* b, std::size_t n);
    /// y[i] += alpha * x[i]
    void (*axpy_f64)(double alpha, const double* x, double* y, std::size_t n);
    /// sum_i a[i] * b[i]
    double (*dot_f64)(const double* a, const double* b, std::size_t n);
};

/// Variants compiled into this build that the running CPU supports.
std::vector<Isa> available_isas();

/// Throws UsageError if the variant is not available.
const KernelTable& kernels_for(Isa isa);

/// The active variant, selected on first use.
const KernelTable& active();

namespace detail {
extern const KernelTable scalar_table;
#if defined(SCC_HAVE_AVX2_KERNELS)
extern const KernelTable avx2_table;
#endif
#if defined(SCC_HAVE_NEON_KERNELS)
extern const KernelTable neon_table;
#endif
}  // namespace detail

// Convenience wrappers over the active table. Lengths must match.

double squared_l2(std::span<const double> a, std::span<const double> b);
double squared_l2(std::span<const float> a, std::span<const float> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace scc::simd
