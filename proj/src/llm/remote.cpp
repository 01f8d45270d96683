#include "scc/llm/remote.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "scc/common/error.hpp"

namespace scc::llm {

std::string api_key_from_env() {
    const char* value = std::getenv(kApiKeyVariable);
    if (value == nullptr || *value == '\0') {
        throw RemoteError(std::string("remote backend: environment variable ") + kApiKeyVariable + " is not set");
    }
    return value;
}

void RemoteBackend::Slots::acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
}

void RemoteBackend::Slots::release() {
    {
        std::lock_guard lock(mu_);
        ++free_;
    }
    cv_.notify_one();
}

RemoteBackend::RemoteBackend(std::shared_ptr<HttpTransport> transport, std::string api_key,
                             std::shared_ptr<ResponseCache> cache, RemoteOptions options, Sleeper sleeper)
    : transport_(std::move(transport)),
      api_key_(std::move(api_key)),
      cache_(std::move(cache)),
      options_(std::move(options)),
      sleeper_(std::move(sleeper)),
      slots_(options_.max_in_flight),
      rng_(options_.jitter_seed) {
    if (!transport_) throw UsageError("remote backend: no transport");
    if (api_key_.empty()) throw RemoteError("remote backend: empty API key");
    if (options_.max_in_flight == 0) throw UsageError("remote backend: max_in_flight must be positive");
    if (options_.retry.attempts < 1) throw UsageError("remote backend: attempts must be positive");
    if (!sleeper_) {
        sleeper_ = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
    }
}

double RemoteBackend::backoff(int attempt) {
    const auto& r = options_.retry;
    const double cap = std::min(r.max_delay_seconds, r.base_seconds * std::pow(r.factor, attempt));
    std::lock_guard lock(rng_mu_);
    return rng_.uniform() * cap;
}

LlmResponse RemoteBackend::complete(const LlmRequest& request) {
    request.validate();
    const CacheKey key = cache_key(request);
    if (cache_) {
        if (auto hit = cache_->get(key)) return response_from_entry(*hit, "remote");
    }
    slots_.acquire();
    try {
        auto out = call(request, key);
        slots_.release();
        return out;
    } catch (...) {
        slots_.release();
        throw;
    }
}

LlmResponse RemoteBackend::call(const LlmRequest& request, const CacheKey& key) {
    const std::string body = chat_body(request).dump();
    const HeaderList headers = {{"Authorization", "Bearer " + api_key_}};
    std::string last;
    for (int attempt = 0; attempt < options_.retry.attempts; ++attempt) {
        const HttpResponse res = transport_->post_json(options_.path, body, headers);
        if (res.status == 200) {
            json raw;
            std::string content;
            TokenUsage usage;
            try {
                raw = json::parse(res.body);
                content = raw.at("choices").at(0).at("message").at("content").get<std::string>();
                if (raw.contains("usage")) {
                    usage.prompt_tokens = raw["usage"].value("prompt_tokens", std::size_t{0});
                    usage.completion_tokens = raw["usage"].value("completion_tokens", std::size_t{0});
                }
            } catch (const json::exception& e) {
                throw RemoteError(std::string("remote backend: malformed response: ") + e.what());
            }
            if (cache_) cache_->put(key, make_entry(request, content, usage, raw));
            LlmResponse out;
            out.text = postprocess(content);
            out.usage = usage;
            out.backend = "remote";
            return out;
        }
        if (res.status == 401 || res.status == 403) {
            throw RemoteError("remote backend: authentication failed (HTTP " + std::to_string(res.status) + ")");
        }
        const bool retryable = res.status == 0 || res.status == 408 || res.status == 429 || res.status >= 500;
        last = res.status == 0 ? "transport error: " + res.error : "HTTP " + std::to_string(res.status);
        if (!retryable) throw RemoteError("remote backend: request failed (" + last + ")");
        if (attempt + 1 == options_.retry.attempts) break;

        double delay = backoff(attempt);
        if (res.status == 429 && res.retry_after) delay = *res.retry_after;
        sleeper_(std::chrono::duration<double>(delay));
    }
    throw RemoteError("remote backend: giving up after " + std::to_string(options_.retry.attempts) +
                      " attempts (" + last + ")");
}

}  // namespace scc::llm
