#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scc/codeform/solidity_parser.hpp"

namespace scc::codeform {

/// Structural token sequence for one snippet.
struct SbtSequence {
    std::vector<std::string> tokens;
    /// Set when the source did not parse and the token-class fallback was used.
    bool degraded = false;

    bool operator==(const SbtSequence&) const = default;
};

/// Pre-order traversal without bracket tokens: interior nodes emit their kind,
/// leaves emit their text. The SourceUnit root is not emitted.
std::vector<std::string> linearize(const AstNode& root);

/// Parses and linearizes; falls back to degraded_sbt when parsing fails.
SbtSequence to_sbt(std::string_view code);

/// Token-class stream in source order: keywords as themselves, identifiers as
/// "Identifier", literals as "Literal", punctuation as Open/Close/Separator/
/// Dot/Operator.
SbtSequence degraded_sbt(std::string_view code);

}  // namespace scc::codeform
