#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "scc/common/digest.hpp"
#include "scc/common/jsonl.hpp"

namespace scc::llm {

struct LlmRequest {
    std::string model = "gpt-3.5-turbo";
    std::string prompt;
    double temperature = 0.0;
    std::size_t max_tokens = 64;
    /// Free-form label for logs and mock lookups (usually the query id).
    std::string tag;

    /// Throws UsageError on an empty prompt or temperature outside [0, 2].
    void validate() const;
};

struct TokenUsage {
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
};

struct LlmResponse {
    std::string text;
    TokenUsage usage;
    std::string backend;
    bool cache_hit = false;
};

using CacheKey = Sha256;

/// Digest over model, prompt, temperature and max_tokens; the tag is excluded.
CacheKey cache_key(const LlmRequest& request);

/// Trims whitespace, removes one layer of matching surrounding quotes and
/// turns internal line breaks into single spaces.
std::string postprocess(std::string_view raw);

/// Chat-completion request body.
json chat_body(const LlmRequest& request);

}  // namespace scc::llm
