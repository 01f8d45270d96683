#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scc/codeform/sbt.hpp"

namespace scc::codeform {

/// Minimum number of single-token insertions, deletions and substitutions.
/// Two-row dynamic program, O(min(|a|,|b|)) memory.
template <class T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return levenshtein(std::span<const std::string>(a), std::span<const std::string>(b));
}

/// (|A| + |B| - lev) / (|A| + |B|) over SBT tokens. Both empty gives 1,
/// exactly one empty gives 0.
double syntactic_similarity(const SbtSequence& a, const SbtSequence& b);
double syntactic_similarity(std::string_view code_a, std::string_view code_b);

/// Deduplicated, sorted code tokens.
struct LexSet {
    std::vector<std::string> tokens;

    bool operator==(const LexSet&) const = default;
};

enum class LexMode {
    subtokens,   // CamelCase/underscore subtokens, lowercased
    raw_tokens,  // whole lexer tokens (identifiers, keywords, literals, punctuation)
};

LexSet lexical_set(std::string_view code, LexMode mode = LexMode::subtokens);

/// Jaccard index |A n B| / |A u B|; both empty gives 1.
double jaccard(const LexSet& a, const LexSet& b);
double lexical_similarity(std::string_view code_a, std::string_view code_b,
                          LexMode mode = LexMode::subtokens);

/// lambda * lexical + (1 - lambda) * syntactic. Throws UsageError when lambda
/// is outside [0, 1].
double mixed_score(double lexical, double syntactic, double lambda);

/// Precomputed structural and lexical views of one snippet.
struct CodeView {
    SbtSequence sbt;
    LexSet lex;
};

CodeView make_view(std::string_view code, LexMode mode = LexMode::subtokens);

struct SimilarityBreakdown {
    double lexical = 0.0;
    double syntactic = 0.0;
    double mixed = 0.0;
};

SimilarityBreakdown compare(const CodeView& a, const CodeView& b, double lambda);

double mixed_score(std::string_view code_a, std::string_view code_b, double lambda = 0.7,
                   LexMode mode = LexMode::subtokens);

}  // namespace scc::codeform
