#include "scc/llm/transport.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>

#include "scc/common/error.hpp"

namespace scc::llm {

namespace {

std::optional<double> parse_retry_after(const std::string& value) {
    if (value.empty()) return std::nullopt;
    double seconds = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seconds);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(seconds) || seconds < 0) {
        return std::nullopt;  // HTTP-date form is not supported
    }
    return seconds;
}

class HttplibTransport final : public HttpTransport {
public:
    HttplibTransport(std::string base_url, double timeout_seconds)
        : base_url_(std::move(base_url)), timeout_(timeout_seconds) {}

    HttpResponse post_json(const std::string& path, const std::string& body,
                           const HeaderList& headers) override {
        httplib::Client client(base_url_);
        const auto secs = static_cast<time_t>(timeout_);
        const auto usecs = static_cast<time_t>((timeout_ - static_cast<double>(secs)) * 1e6);
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);

        httplib::Headers hs;
        for (const auto& [k, v] : headers) hs.emplace(k, v);

        HttpResponse out;
        auto result = client.Post(path, hs, body, "application/json");
        if (!result) {
            out.error = httplib::to_string(result.error());
            return out;
        }
        out.status = result->status;
        out.body = result->body;
        if (result->has_header("Retry-After")) {
            out.retry_after = parse_retry_after(result->get_header_value("Retry-After"));
        }
        return out;
    }

private:
    std::string base_url_;
    double timeout_;
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport(const std::string& base_url, double timeout_seconds) {
    if (!(base_url.starts_with("http://") || base_url.starts_with("https://")) ||
        base_url.find("://") + 3 >= base_url.size()) {
        throw UsageError("invalid base URL '" + base_url + "'");
    }
    if (!(timeout_seconds > 0.0)) throw UsageError("timeout must be positive");
    return std::make_shared<HttplibTransport>(base_url, timeout_seconds);
}

}  // namespace scc::llm
