#pragma once

#include <cstddef>
#include <span>

namespace scc::eval {

struct WilcoxonResult {
    double w_plus = 0.0;       // rank sum of positive differences
    double w_minus = 0.0;      // rank sum of negative differences
    std::size_t n_nonzero = 0; // pairs left after dropping zero differences
    bool exact = false;
    double p_value = 1.0;      // two-sided
};

inline constexpr std::size_t kWilcoxonMinPairs = 6;
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Paired signed-rank test on a - b. Zero differences are dropped and tied
/// absolute differences share their average rank. Up to 25 nonzero pairs use
/// the exact permutation distribution; beyond that a tie-corrected normal
/// approximation with continuity correction. Throws UsageError on length
/// mismatch, when every difference is zero ("no nonzero differences"), or
/// when fewer than 6 nonzero differences remain.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace scc::eval
