#include "scc/codeform/similarity.hpp"

#include <algorithm>
#include <iterator>

#include "scc/codeform/solidity_lexer.hpp"
#include "scc/common/error.hpp"
#include "scc/corpus/tokenize.hpp"

namespace scc::codeform {

double syntactic_similarity(const SbtSequence& a, const SbtSequence& b) {
    const std::size_t total = a.tokens.size() + b.tokens.size();
    if (a.tokens.empty() && b.tokens.empty()) return 1.0;
    if (a.tokens.empty() || b.tokens.empty()) return 0.0;
    const std::size_t lev = levenshtein(a.tokens, b.tokens);
    return static_cast<double>(total - lev) / static_cast<double>(total);
}

double syntactic_similarity(std::string_view code_a, std::string_view code_b) {
    return syntactic_similarity(to_sbt(code_a), to_sbt(code_b));
}

LexSet lexical_set(std::string_view code, LexMode mode) {
    LexSet set;
    if (mode == LexMode::subtokens) {
        set.tokens = corpus::tokenize_identifiers(code).tokens;
    } else {
        for (auto& t : lex_solidity(code)) {
            if (t.kind != TokenKind::end && !t.text.empty()) set.tokens.push_back(std::move(t.text));
        }
    }
    std::sort(set.tokens.begin(), set.tokens.end());
    set.tokens.erase(std::unique(set.tokens.begin(), set.tokens.end()), set.tokens.end());
    return set;
}

double jaccard(const LexSet& a, const LexSet& b) {
    if (a.tokens.empty() && b.tokens.empty()) return 1.0;
    std::size_t common = 0;
    auto i = a.tokens.begin();
    auto j = b.tokens.begin();
    while (i != a.tokens.end() && j != b.tokens.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.tokens.size() + b.tokens.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

double lexical_similarity(std::string_view code_a, std::string_view code_b, LexMode mode) {
    return jaccard(lexical_set(code_a, mode), lexical_set(code_b, mode));
}

double mixed_score(double lexical, double syntactic, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw UsageError("mixed_score: lambda must lie in [0, 1], got " + std::to_string(lambda));
    }
    return lambda * lexical + (1.0 - lambda) * syntactic;
}

CodeView make_view(std::string_view code, LexMode mode) {
    return CodeView{to_sbt(code), lexical_set(code, mode)};
}

SimilarityBreakdown compare(const CodeView& a, const CodeView& b, double lambda) {
    SimilarityBreakdown s;
    s.lexical = jaccard(a.lex, b.lex);
    s.syntactic = syntactic_similarity(a.sbt, b.sbt);
    s.mixed = mixed_score(s.lexical, s.syntactic, lambda);
    return s;
}

double mixed_score(std::string_view code_a, std::string_view code_b, double lambda, LexMode mode) {
    return compare(make_view(code_a, mode), make_view(code_b, mode), lambda).mixed;
}

}  // namespace scc::codeform
