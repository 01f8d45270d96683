#include "scc/codeform/sbt.hpp"

#include "scc/codeform/solidity_lexer.hpp"

namespace scc::codeform {

namespace {

void emit(const AstNode& node, std::vector<std::string>& out) {
    if (node.is_leaf()) {
        out.push_back(node.text);
        return;
    }
    out.push_back(node.kind);
    for (const auto& child : node.children) emit(child, out);
}

std::string punct_class(std::string_view p) {
    if (p == "(" || p == "[" || p == "{") return "Open";
    if (p == ")" || p == "]" || p == "}") return "Close";
    if (p == ";" || p == ",") return "Separator";
    if (p == ".") return "Dot";
    return "Operator";
}

}  // namespace

std::vector<std::string> linearize(const AstNode& root) {
    std::vector<std::string> out;
    if (root.kind == "SourceUnit") {
        for (const auto& child : root.children) emit(child, out);
    } else {
        emit(root, out);
    }
    return out;
}

SbtSequence degraded_sbt(std::string_view code) {
    SbtSequence seq;
    seq.degraded = true;
    for (const auto& t : lex_solidity(code)) {
        switch (t.kind) {
            case TokenKind::keyword: seq.tokens.push_back(t.text); break;
            case TokenKind::identifier: seq.tokens.emplace_back("Identifier"); break;
            case TokenKind::number:
            case TokenKind::string_literal: seq.tokens.emplace_back("Literal"); break;
            case TokenKind::punct: seq.tokens.push_back(punct_class(t.text)); break;
            case TokenKind::end: break;
        }
    }
    return seq;
}

SbtSequence to_sbt(std::string_view code) {
    try {
        return SbtSequence{linearize(parse_solidity(code)), false};
    } catch (const ParseError&) {
        return degraded_sbt(code);
    }
}

}  // namespace scc::codeform
