#pragma once

#include <cstddef>

namespace scc::eval {

struct SampleSizeParams {
    double size = 0.0;
    double e = 0.05;
    double z = 1.96;

    /// z^2 * 0.25 / e^2
    double n0() const noexcept { return z * z * 0.25 / (e * e); }
    void validate() const;
};

/// Finite-population sample size n0 / (1 + (n0 - 1) / size), rounded to the
/// nearest integer.
std::size_t sample_size(const SampleSizeParams& params);
std::size_t sample_size(double size, double e = 0.05, double z = 1.96);

}  // namespace scc::eval
