#include "scc/eval/sampling.hpp"

#include <cmath>

#include "scc/common/error.hpp"

namespace scc::eval {

void SampleSizeParams::validate() const {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("sample size: e must be in (0, 1)");
    if (!(z > 0.0) || !std::isfinite(z)) throw UsageError("sample size: z must be positive");
    if (!(size >= 1.0) || !std::isfinite(size)) throw UsageError("sample size: size must be at least 1");
}

std::size_t sample_size(const SampleSizeParams& params) {
    params.validate();
    const double n0 = params.n0();
    return static_cast<std::size_t>(std::llround(n0 / (1.0 + (n0 - 1.0) / params.size)));
}

std::size_t sample_size(double size, double e, double z) { return sample_size(SampleSizeParams{size, e, z}); }

}  // namespace scc::eval
