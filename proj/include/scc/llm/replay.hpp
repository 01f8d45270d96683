#pragma once

#include <memory>

#include "scc/common/error.hpp"
#include "scc/llm/backend.hpp"
#include "scc/llm/cache.hpp"

namespace scc::llm {

class CacheMissError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

/// Serves responses from the cache only.
class ReplayBackend final : public LlmBackend {
public:
    explicit ReplayBackend(std::shared_ptr<ResponseCache> cache) : cache_(std::move(cache)) {}

    LlmResponse complete(const LlmRequest& request) override;
    std::string_view name() const noexcept override { return "replay"; }

private:
    std::shared_ptr<ResponseCache> cache_;
};

}  // namespace scc::llm
