#include "scc/eval/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "scc/common/error.hpp"

namespace scc::eval {

namespace {

struct Ranked {
    std::vector<double> ranks;  // aligned with diffs
    double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

Ranked rank_abs(const std::vector<double>& diffs) {
    const std::size_t m = diffs.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });
    Ranked out;
    out.ranks.assign(m, 0.0);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

// Two-sided p from the exact null distribution of the positive rank sum.
// Ranks are doubled so averaged ties become integers.
double exact_p(const std::vector<double>& ranks, double w_plus) {
    std::vector<std::size_t> doubled;
    std::size_t total = 0;
    for (double r : ranks) {
        doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
        total += doubled.back();
    }
    std::vector<double> counts(total + 1, 0.0);
    counts[0] = 1.0;
    std::size_t reach = 0;
    for (std::size_t r : doubled) {
        for (std::size_t s = reach + 1; s-- > 0;) {
            if (counts[s] != 0.0) counts[s + r] += counts[s];
        }
        reach += r;
    }
    const auto w = static_cast<std::size_t>(std::llround(2.0 * w_plus));
    const double all = std::ldexp(1.0, static_cast<int>(ranks.size()));
    double low = 0.0, high = 0.0;
    for (std::size_t s = 0; s <= total; ++s) {
        if (s <= w) low += counts[s];
        if (s >= w) high += counts[s];
    }
    return std::min(1.0, 2.0 * std::min(low, high) / all);
}

double normal_p(std::size_t m, double tie_term, double w_plus) {
    const double n = static_cast<double>(m);
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) return 1.0;
    const double dev = std::max(0.0, std::fabs(w_plus - mean) - 0.5);
    return std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("wilcoxon: samples differ in length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) throw DataError("wilcoxon: non-finite score");
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) throw UsageError("wilcoxon: no nonzero differences");
    if (diffs.size() < kWilcoxonMinPairs) {
        throw UsageError("wilcoxon: only " + std::to_string(diffs.size()) + " nonzero differences, need at least " +
                         std::to_string(kWilcoxonMinPairs));
    }
    const Ranked ranked = rank_abs(diffs);
    WilcoxonResult out;
    out.n_nonzero = diffs.size();
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        (diffs[i] > 0 ? out.w_plus : out.w_minus) += ranked.ranks[i];
    }
    out.exact = diffs.size() <= kWilcoxonExactLimit;
    out.p_value = out.exact ? exact_p(ranked.ranks, out.w_plus) : normal_p(diffs.size(), ranked.tie_term, out.w_plus);
    return out;
}

}  // namespace scc::eval
