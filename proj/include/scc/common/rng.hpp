#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace scc {

/// Seeded generator whose outputs are identical across standard libraries.
///
/// std::mt19937_64 is fully specified by the standard, but the distributions
/// and std::shuffle are not, so bounded draws and shuffling live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1).
    double uniform();

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Mixes a base seed with a string so per-item streams are independent.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt) noexcept;

}  // namespace scc
