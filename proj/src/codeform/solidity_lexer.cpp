#include "scc/codeform/solidity_lexer.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace scc::codeform {

namespace {

constexpr std::array kKeywords = {
    "abstract", "anonymous", "as", "assembly", "break", "catch", "constant", "constructor",
    "continue", "contract", "delete", "do", "else", "emit", "enum", "event", "external",
    "fallback", "false", "for", "function", "if", "immutable", "import", "indexed", "interface",
    "internal", "is", "library", "mapping", "memory", "modifier", "new", "override", "payable",
    "pragma", "private", "public", "pure", "receive", "return", "returns", "storage",
    "calldata", "struct", "throw", "true", "try", "type", "unchecked", "using", "var", "view",
    "virtual", "while",
};

// longest first so greedy matching works
constexpr std::array kPunctuators = {
    ">>>=", "<<=", ">>=", ">>>", "**", "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "->", ":=",
};

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) { return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

bool valid_width(std::string_view digits, int lo, int hi, int step) {
    if (digits.empty()) return true;
    if (!all_digits(digits)) return false;
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
    return value >= lo && value <= hi && value % step == 0;
}

}  // namespace

bool is_solidity_keyword(std::string_view word) noexcept {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_elementary_type(std::string_view w) noexcept {
    if (w == "address" || w == "bool" || w == "string" || w == "bytes" || w == "byte" ||
        w == "int" || w == "uint" || w == "fixed" || w == "ufixed") {
        return true;
    }
    if (w.starts_with("uint")) return valid_width(w.substr(4), 8, 256, 8);
    if (w.starts_with("int")) return valid_width(w.substr(3), 8, 256, 8);
    if (w.starts_with("bytes")) return valid_width(w.substr(5), 1, 32, 1);
    return false;
}

std::vector<Token> lex_solidity(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            const auto close = src.find("*/", i + 2);
            i = close == std::string_view::npos ? n : close + 2;
            continue;
        }
        const std::size_t start = i;

        // string literal, optionally prefixed by hex or unicode
        auto lex_string = [&](std::size_t quote_pos) {
            const char quote = src[quote_pos];
            std::size_t j = quote_pos + 1;
            while (j < n && src[j] != quote) {
                if (src[j] == '\\' && j + 1 < n) ++j;
                ++j;
            }
            if (j < n) ++j;
            out.push_back({TokenKind::string_literal, std::string(src.substr(start, j - start)), start});
            i = j;
        };
        if (c == '"' || c == '\'') {
            lex_string(i);
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && is_ident_char(src[j])) ++j;
            const std::string_view word = src.substr(i, j - i);
            if ((word == "hex" || word == "unicode") && j < n && (src[j] == '"' || src[j] == '\'')) {
                lex_string(j);
                continue;
            }
            const TokenKind kind = is_solidity_keyword(word) ? TokenKind::keyword : TokenKind::identifier;
            out.push_back({kind, std::string(word), start});
            i = j;
            continue;
        }
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(src[i + 1]))) {
            std::size_t j = i;
            if (c == '0' && j + 1 < n && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
                j += 2;
                while (j < n && (is_hex(src[j]) || src[j] == '_')) ++j;
            } else {
                while (j < n && (is_digit(src[j]) || src[j] == '_')) ++j;
                if (j < n && src[j] == '.' && j + 1 < n && is_digit(src[j + 1])) {
                    ++j;
                    while (j < n && (is_digit(src[j]) || src[j] == '_')) ++j;
                }
                if (j < n && (src[j] == 'e' || src[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < n && src[k] == '-') ++k;
                    if (k < n && is_digit(src[k])) {
                        j = k;
                        while (j < n && is_digit(src[j])) ++j;
                    }
                }
            }
            out.push_back({TokenKind::number, std::string(src.substr(i, j - i)), start});
            i = j;
            continue;
        }
        bool matched = false;
        for (const std::string_view p : kPunctuators) {
            if (src.substr(i, p.size()) == p) {
                out.push_back({TokenKind::punct, std::string(p), start});
                i += p.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        out.push_back({TokenKind::punct, std::string(1, c), start});
        ++i;
    }
    out.push_back({TokenKind::end, "", n});
    return out;
}

}  // namespace scc::codeform
