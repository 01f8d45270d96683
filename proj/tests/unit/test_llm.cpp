#include <doctest.h>

#include <atomic>
#include <deque>
#include <httplib.h>
#include <mutex>
#include <thread>

#include "../support/helpers.hpp"
#include "scc/common/error.hpp"
#include "scc/llm/cache.hpp"
#include "scc/llm/mock.hpp"
#include "scc/llm/remote.hpp"
#include "scc/llm/replay.hpp"
#include "scc/llm/request.hpp"
#include "scc/llm/transport.hpp"
#include "scc/promptgen/prompt.hpp"

using namespace scc;
using namespace scc::llm;

namespace {

std::string completion(const std::string& content) {
    return json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
                {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 3}}}}
        .dump();
}

// Scripted transport: pops queued responses, then answers 200 with `fallback`.
class FakeTransport : public HttpTransport {
public:
    std::mutex mu;
    std::deque<HttpResponse> script;
    std::string fallback = completion("\"Returns the balance.\"\n");
    std::atomic<int> calls{0};
    std::atomic<int> in_flight{0};
    std::atomic<int> peak{0};
    std::chrono::milliseconds delay{0};
    std::vector<HeaderList> seen_headers;
    std::vector<std::string> seen_bodies;
    std::function<void()> on_call;

    HttpResponse post_json(const std::string&, const std::string& body, const HeaderList& headers) override {
        const int now = ++in_flight;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
        ++calls;
        if (on_call) on_call();
        if (delay.count() > 0) std::this_thread::sleep_for(delay);
        HttpResponse out;
        {
            std::lock_guard lock(mu);
            seen_headers.push_back(headers);
            seen_bodies.push_back(body);
            if (!script.empty()) {
                out = script.front();
                script.pop_front();
            } else {
                out.status = 200;
                out.body = fallback;
            }
        }
        --in_flight;
        return out;
    }
};

HttpResponse status(int code, std::optional<double> retry_after = std::nullopt) {
    HttpResponse r;
    r.status = code;
    r.retry_after = retry_after;
    r.body = "{}";
    return r;
}

struct Harness {
    testing::TempDir dir;
    std::shared_ptr<FakeTransport> transport = std::make_shared<FakeTransport>();
    std::shared_ptr<ResponseCache> cache = std::make_shared<ResponseCache>(dir / "cache");
    std::vector<double> sleeps;
    std::mutex sleep_mu;

    RemoteBackend backend(RemoteOptions options = {}) {
        return RemoteBackend(transport, "test-key", cache, options, [this](std::chrono::duration<double> d) {
            std::lock_guard lock(sleep_mu);
            sleeps.push_back(d.count());
        });
    }
};

LlmRequest request(const std::string& prompt = "summarize: function f() {}") {
    LlmRequest r;
    r.prompt = prompt;
    r.tag = "q1";
    return r;
}

}  // namespace

TEST_SUITE("llm") {

TEST_CASE("request validation and cache key") {
    CHECK_THROWS_AS(LlmRequest{}.validate(), UsageError);
    auto r = request();
    r.temperature = 2.5;
    CHECK_THROWS_AS(r.validate(), UsageError);
    const auto a = request();
    auto b = a;
    b.tag = "other";
    CHECK(cache_key(a) == cache_key(b));
    for (auto mutate : std::vector<std::function<void(LlmRequest&)>>{
             [](LlmRequest& x) { x.model = "m2"; }, [](LlmRequest& x) { x.prompt += " "; },
             [](LlmRequest& x) { x.temperature = 0.5; }, [](LlmRequest& x) { x.max_tokens = 65; }}) {
        auto c = a;
        mutate(c);
        CHECK(cache_key(a) != cache_key(c));
    }
    // the key is SHA-256 over the JSON array [model, prompt, temperature, max_tokens]
    const std::string canonical = json::array({a.model, a.prompt, a.temperature, a.max_tokens}).dump();
    CHECK(cache_key(a) == sha256(canonical));
    const auto body = chat_body(a);
    CHECK(body["model"] == "gpt-3.5-turbo");
    CHECK(body["messages"][0]["content"] == a.prompt);
    CHECK(body["temperature"] == 0.0);
    CHECK(body["max_tokens"] == 64);
}

TEST_CASE("postprocess") {
    CHECK(postprocess("  hello world \n") == "hello world");
    CHECK(postprocess("\"quoted text\"") == "quoted text");
    CHECK(postprocess("'single'") == "single");
    CHECK(postprocess("`tick`") == "tick");
    CHECK(postprocess("\"mismatched'") == "\"mismatched'");
    CHECK(postprocess("line one\nline two\r\nline three") == "line one line two line three");
    CHECK(postprocess("") == "");
    CHECK(postprocess("\"") == "\"");
}

TEST_CASE("cache stores entries atomically by key") {
    testing::TempDir dir;
    ResponseCache cache(dir / "c");
    const auto key = cache_key(request());
    CHECK_FALSE(cache.get(key).has_value());
    cache.put(key, make_entry(request(), "content", TokenUsage{1, 2}, json{{"x", 1}}));
    const auto got = cache.get(key);
    REQUIRE(got.has_value());
    CHECK(cache.path_for(key).filename().string() == to_hex(key) + ".json");
    const auto resp = response_from_entry(*got, "replay");
    CHECK(resp.text == "content");
    CHECK(resp.cache_hit);
    CHECK(resp.usage.completion_tokens == 2);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir / "c")) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
}

TEST_CASE("remote success populates the cache and a second call hits it") {
    Harness h;
    auto backend = h.backend();
    const auto first = backend.complete(request());
    CHECK(first.text == "Returns the balance.");
    CHECK_FALSE(first.cache_hit);
    CHECK(first.usage.prompt_tokens == 11);
    CHECK(h.transport->calls == 1);
    REQUIRE(h.transport->seen_headers.size() == 1);
    CHECK(h.transport->seen_headers[0][0] == std::pair<std::string, std::string>{"Authorization", "Bearer test-key"});
    const auto second = backend.complete(request());
    CHECK(second.cache_hit);
    CHECK(second.text == first.text);
    CHECK(h.transport->calls == 1);
}

TEST_CASE("the cache entry exists before complete returns") {
    Harness h;
    auto backend = h.backend();
    const auto key = cache_key(request());
    bool existed_during_call = true;
    h.transport->on_call = [&] { existed_during_call = h.cache->get(key).has_value(); };
    backend.complete(request());
    CHECK_FALSE(existed_during_call);
    const auto entry = h.cache->get(key);
    REQUIRE(entry.has_value());
    CHECK(entry->at("request") == chat_body(request()));
    CHECK((*entry)["content"] == "\"Returns the balance.\"\n");
}

TEST_CASE("transient failures are retried with bounded backoff") {
    Harness h;
    h.transport->script = {status(500), status(0), status(503)};
    RemoteOptions o;
    o.jitter_seed = 4;
    auto backend = h.backend(o);
    CHECK(backend.complete(request()).text == "Returns the balance.");
    CHECK(h.transport->calls == 4);
    REQUIRE(h.sleeps.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(h.sleeps[i] >= 0.0);
        CHECK(h.sleeps[i] <= std::min(60.0, std::pow(2.0, static_cast<double>(i))));
    }
}

TEST_CASE("429 honours Retry-After") {
    Harness h;
    h.transport->script = {status(429, 7.5), status(408)};
    auto backend = h.backend();
    backend.complete(request());
    REQUIRE(h.sleeps.size() == 2);
    CHECK(h.sleeps[0] == 7.5);
    CHECK(h.sleeps[1] <= 2.0);
}

TEST_CASE("authentication failures are not retried") {
    for (int code : {401, 403}) {
        Harness h;
        h.transport->script = {status(code)};
        auto backend = h.backend();
        const auto msg = testing::thrown_message<RemoteError>([&] { backend.complete(request()); });
        CHECK(testing::contains(msg, std::to_string(code)));
        CHECK(h.transport->calls == 1);
        CHECK(h.sleeps.empty());
        CHECK_FALSE(h.cache->get(cache_key(request())).has_value());
    }
}

TEST_CASE("other client errors fail without retry") {
    Harness h;
    h.transport->script = {status(400)};
    auto backend = h.backend();
    CHECK_THROWS_AS(backend.complete(request()), RemoteError);
    CHECK(h.transport->calls == 1);
}

TEST_CASE("giving up after the attempt limit") {
    Harness h;
    for (int i = 0; i < 10; ++i) h.transport->script.push_back(status(502));
    auto backend = h.backend();
    const auto msg = testing::thrown_message<RemoteError>([&] { backend.complete(request()); });
    CHECK(testing::contains(msg, "giving up after 5 attempts"));
    CHECK(h.transport->calls == 5);
    CHECK(h.sleeps.size() == 4);
}

TEST_CASE("malformed success bodies are remote errors") {
    Harness h;
    HttpResponse bad;
    bad.status = 200;
    bad.body = "{\"choices\": []}";
    h.transport->script = {bad};
    auto backend = h.backend();
    CHECK_THROWS_AS(backend.complete(request()), RemoteError);
}

TEST_CASE("no more than four requests are in flight") {
    Harness h;
    h.transport->delay = std::chrono::milliseconds(20);
    auto backend = h.backend();
    std::vector<std::jthread> threads;
    for (int i = 0; i < 16; ++i) {
        threads.emplace_back([&backend, i] { backend.complete(request("prompt " + std::to_string(i))); });
    }
    threads.clear();
    CHECK(h.transport->calls == 16);
    CHECK(h.transport->peak <= 4);
    CHECK(h.transport->peak >= 2);
}

TEST_CASE("api key comes from the environment") {
    ::setenv(kApiKeyVariable, "from-env", 1);
    CHECK(api_key_from_env() == "from-env");
    ::unsetenv(kApiKeyVariable);
    CHECK_THROWS_AS(api_key_from_env(), RemoteError);
    CHECK_THROWS_AS(RemoteBackend(std::make_shared<FakeTransport>(), "", nullptr), RemoteError);
}

TEST_CASE("http transport talks to a real server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        if (hits++ == 0) {
            res.status = 429;
            res.set_header("Retry-After", "0");
            return;
        }
        CHECK(req.get_header_value("Authorization") == "Bearer k");
        res.set_content(completion("served"), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    auto transport = make_http_transport("http://127.0.0.1:" + std::to_string(port), 5);
    RemoteBackend backend(transport, "k", nullptr, {}, [](std::chrono::duration<double>) {});
    CHECK(backend.complete(request()).text == "served");
    CHECK(hits == 2);
    server.stop();
    t.join();
    CHECK_THROWS_AS(make_http_transport("not a url", 1), UsageError);
    // nothing listens on the port any more: transport failure, retried, then given up
    RemoteOptions o;
    o.retry.attempts = 2;
    RemoteBackend dead(transport, "k", nullptr, o, [](std::chrono::duration<double>) {});
    CHECK_THROWS_AS(dead.complete(request()), RemoteError);
}

TEST_CASE("mock echo returns the most similar demo comment") {
    using promptgen::DemoOrder;
    std::vector<retrieval::Demonstration> demos{{"a", "function a() {}", "best comment", 0, 0.9},
                                                 {"b", "function b() {}", "second comment", 0, 0.5}};
    const auto tmpl = promptgen::PromptTemplate::standard();
    promptgen::PromptOptions last;
    auto first = last;
    first.order = DemoOrder::most_similar_first;
    auto req = request();
    req.prompt = promptgen::build_prompt(tmpl, "function q() {}", demos, last).text;
    CHECK(MockBackend::echo_top1().complete(req).text == "best comment");
    req.prompt = promptgen::build_prompt(tmpl, "function q() {}", demos, first).text;
    CHECK(MockBackend::echo_top1(DemoOrder::most_similar_first).complete(req).text == "best comment");
    promptgen::PromptOptions zero;
    zero.mode = promptgen::ShotMode::zero;
    req.prompt = promptgen::build_prompt(tmpl, "function q() {}", demos, zero).text;
    CHECK(MockBackend::echo_top1().complete(req).text == "");
    CHECK(MockBackend::echo_top1().name() == "mock");
}

TEST_CASE("mock fixed and truncating behaviours") {
    CHECK(MockBackend::fixed("always this").complete(request()).text == "always this");
    auto req = request();
    req.prompt = "Target code:\nx\nThe length should not exceed 3 words\n";
    auto mock = MockBackend::truncate_ground_truth({{"q1", "one two three four five"}});
    CHECK(mock.complete(req).text == "one two three");
    req.tag = "unknown";
    CHECK_THROWS_AS(mock.complete(req), DataError);
}

TEST_CASE("replay serves cached responses and reports misses") {
    Harness h;
    auto remote = h.backend();
    remote.complete(request());
    ReplayBackend replay(h.cache);
    const auto r = replay.complete(request());
    CHECK(r.text == "Returns the balance.");
    CHECK(r.cache_hit);
    CHECK(replay.name() == "replay");
    CHECK_THROWS_AS(replay.complete(request("never seen")), CacheMissError);
    CHECK(h.transport->calls == 1);
}

}  // TEST_SUITE
