#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "scc/common/rng.hpp"
#include "scc/llm/backend.hpp"
#include "scc/llm/cache.hpp"
#include "scc/llm/transport.hpp"

namespace scc::llm {

inline constexpr const char* kApiKeyVariable = "SCC_API_KEY";

/// Reads the API key from SCC_API_KEY; throws RemoteError when unset or empty.
std::string api_key_from_env();

struct RetryPolicy {
    int attempts = 5;
    double base_seconds = 1.0;
    double factor = 2.0;
    double max_delay_seconds = 60.0;
};

struct RemoteOptions {
    std::string path = "/v1/chat/completions";
    std::size_t max_in_flight = 4;
    RetryPolicy retry;
    std::uint64_t jitter_seed = 0;
};

using Sleeper = std::function<void(std::chrono::duration<double>)>;

/// Chat-completion client with caching, bounded concurrency and retries.
///
/// 401/403 fail immediately. 429, 408, 5xx and transport failures are retried
/// with full-jitter exponential backoff; a Retry-After header on 429 replaces
/// the jittered delay. Responses are written to the cache before returning.
class RemoteBackend final : public LlmBackend {
public:
    RemoteBackend(std::shared_ptr<HttpTransport> transport, std::string api_key,
                  std::shared_ptr<ResponseCache> cache, RemoteOptions options = {},
                  Sleeper sleeper = {});

    LlmResponse complete(const LlmRequest& request) override;
    std::string_view name() const noexcept override { return "remote"; }

private:
    class Slots {
    public:
        explicit Slots(std::size_t n) : free_(n) {}
        void acquire();
        void release();

    private:
        std::mutex mu_;
        std::condition_variable cv_;
        std::size_t free_;
    };

    LlmResponse call(const LlmRequest& request, const CacheKey& key);
    double backoff(int attempt);

    std::shared_ptr<HttpTransport> transport_;
    std::string api_key_;
    std::shared_ptr<ResponseCache> cache_;
    RemoteOptions options_;
    Sleeper sleeper_;
    Slots slots_;
    std::mutex rng_mu_;
    Rng rng_;
};

}  // namespace scc::llm
