#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scc::corpus {

/// Lowercase identifier subtokens in source order.
struct TokenSequence {
    std::vector<std::string> tokens;

    bool operator==(const TokenSequence&) const = default;
};

/// Splits code into identifier subtokens.
///
/// Boundaries are any non-alphanumeric byte (underscores included), a
/// lower-to-upper camel hump, the last capital of an acronym that is followed
/// by a lowercase letter ("HTTPServer" -> http, server) and every
/// letter/digit transition. Output is lowercase ASCII alphanumerics only.
TokenSequence tokenize_identifiers(std::string_view code);

/// Whitespace-separated words, used for corpus statistics and word caps.
std::vector<std::string_view> split_words(std::string_view text);

std::size_t count_words(std::string_view text);

}  // namespace scc::corpus
