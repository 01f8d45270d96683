#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace scc::codeform {

enum class TokenKind {
    identifier,
    keyword,
    number,
    string_literal,
    punct,
    end,
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t offset = 0;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_punct(std::string_view t) const { return is(TokenKind::punct, t); }
    bool is_keyword(std::string_view t) const { return is(TokenKind::keyword, t); }
};

/// Tokenizes Solidity source. Comments and whitespace are dropped. The lexer
/// is total: unknown bytes become single-character punct tokens and an
/// unterminated string runs to the end of input. The returned list always
/// ends with a TokenKind::end token.
std::vector<Token> lex_solidity(std::string_view source);

bool is_solidity_keyword(std::string_view word) noexcept;

/// Elementary type names such as uint256, bytes32, address, bool, string.
bool is_elementary_type(std::string_view word) noexcept;

}  // namespace scc::codeform
