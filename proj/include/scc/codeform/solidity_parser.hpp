#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scc::codeform {

/// Syntax tree node. Interior nodes carry a kind ("FunctionDefinition",
/// "BinaryOperation", ...); leaves carry source text (identifiers, literals,
/// operators, attribute keywords).
struct AstNode {
    std::string kind;
    std::string text;
    std::vector<AstNode> children;

    bool is_leaf() const noexcept { return kind.empty(); }

    static AstNode leaf(std::string text) { return AstNode{{}, std::move(text), {}}; }
    static AstNode node(std::string kind, std::vector<AstNode> children = {}) {
        return AstNode{std::move(kind), {}, std::move(children)};
    }

    bool operator==(const AstNode&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Parses a fragment of Solidity: function, modifier, constructor, fallback
/// and receive definitions, or a bare statement list. The root is a
/// "SourceUnit" node. Throws ParseError on anything outside the supported
/// grammar.
AstNode parse_solidity(std::string_view source);

}  // namespace scc::codeform
