#include "scc/llm/cache.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "scc/common/error.hpp"

namespace scc::llm {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw RemoteError("cache: cannot create " + dir_.string() + ": " + ec.message());
}

std::filesystem::path ResponseCache::path_for(const CacheKey& key) const {
    return dir_ / (to_hex(key) + ".json");
}

std::optional<json> ResponseCache::get(const CacheKey& key) const {
    const auto path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        if (ec) throw RemoteError("cache: cannot stat " + path.string() + ": " + ec.message());
        return std::nullopt;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RemoteError("cache: cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        throw RemoteError("cache: corrupt entry " + path.string() + ": " + e.what());
    }
}

void ResponseCache::put(const CacheKey& key, const json& value) const {
    try {
        write_file_atomic(path_for(key), value.dump(2) + "\n");
    } catch (const RemoteError&) {
        throw;
    } catch (const std::exception& e) {
        throw RemoteError(std::string("cache: ") + e.what());
    }
}

json make_entry(const LlmRequest& request, const std::string& content, const TokenUsage& usage,
                const json& raw_response) {
    return json{{"request", chat_body(request)},
                {"content", content},
                {"usage", {{"prompt_tokens", usage.prompt_tokens}, {"completion_tokens", usage.completion_tokens}}},
                {"raw", raw_response}};
}

LlmResponse response_from_entry(const json& entry, std::string backend) {
    LlmResponse out;
    try {
        out.text = postprocess(entry.at("content").get<std::string>());
        const auto& usage = entry.at("usage");
        out.usage.prompt_tokens = usage.value("prompt_tokens", std::size_t{0});
        out.usage.completion_tokens = usage.value("completion_tokens", std::size_t{0});
    } catch (const json::exception& e) {
        throw RemoteError(std::string("cache: malformed entry: ") + e.what());
    }
    out.backend = std::move(backend);
    out.cache_hit = true;
    return out;
}

}  // namespace scc::llm
