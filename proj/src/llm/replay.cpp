#include "scc/llm/replay.hpp"

namespace scc::llm {

LlmResponse ReplayBackend::complete(const LlmRequest& request) {
    request.validate();
    const CacheKey key = cache_key(request);
    auto entry = cache_->get(key);
    if (!entry) {
        throw CacheMissError("replay backend: cache miss for " + to_hex(key) +
                             (request.tag.empty() ? "" : " (" + request.tag + ")"));
    }
    return response_from_entry(*entry, "replay");
}

}  // namespace scc::llm
