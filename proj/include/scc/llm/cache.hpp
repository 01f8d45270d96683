#pragma once

#include <filesystem>
#include <optional>

#include "scc/common/jsonl.hpp"
#include "scc/llm/request.hpp"

namespace scc::llm {

/// Content-addressed store of JSON documents, one file per key named by the
/// lowercase hex digest. Writes go through a temporary file and rename, so
/// readers never observe partial entries and concurrent identical writes
/// leave one entry. I/O failures throw RemoteError.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path path_for(const CacheKey& key) const;

    std::optional<json> get(const CacheKey& key) const;
    void put(const CacheKey& key, const json& value) const;

private:
    std::filesystem::path dir_;
};

/// Cache entry layout shared by the remote and replay backends.
json make_entry(const LlmRequest& request, const std::string& content, const TokenUsage& usage,
                const json& raw_response);
LlmResponse response_from_entry(const json& entry, std::string backend);

}  // namespace scc::llm
