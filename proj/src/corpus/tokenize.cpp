#include "scc/corpus/tokenize.hpp"

namespace scc::corpus {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_upper(c) || is_lower(c) || is_digit(c); }

char lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// True when a token boundary falls between word[i-1] and word[i].
bool boundary_before(std::string_view word, std::size_t i) {
    const char prev = word[i - 1];
    const char cur = word[i];
    if (is_digit(prev) != is_digit(cur)) return true;
    if (is_lower(prev) && is_upper(cur)) return true;
    // acronym end: "HTTPServer" splits before the 'S'
    if (is_upper(prev) && is_upper(cur) && i + 1 < word.size() && is_lower(word[i + 1])) {
        return true;
    }
    return false;
}

}  // namespace

TokenSequence tokenize_identifiers(std::string_view code) {
    TokenSequence out;
    std::size_t i = 0;
    while (i < code.size()) {
        if (!is_alnum(code[i])) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < code.size() && is_alnum(code[end])) ++end;
        const std::string_view word = code.substr(i, end - i);

        std::size_t start = 0;
        for (std::size_t j = 1; j <= word.size(); ++j) {
            if (j == word.size() || boundary_before(word, j)) {
                std::string token;
                token.reserve(j - start);
                for (std::size_t k = start; k < j; ++k) token.push_back(lower(word[k]));
                out.tokens.push_back(std::move(token));
                start = j;
            }
        }
        i = end;
    }
    return out;
}

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    return words;
}

std::size_t count_words(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

}  // namespace scc::corpus
