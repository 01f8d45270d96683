#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scc::llm {

struct HttpResponse {
    /// 0 when no HTTP response arrived (connection failure, timeout).
    int status = 0;
    std::string body;
    /// Parsed Retry-After header, seconds.
    std::optional<double> retry_after;
    std::string error;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// Blocking JSON POST. Implementations must be safe for concurrent calls.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post_json(const std::string& path, const std::string& body,
                                   const HeaderList& headers) = 0;
};

/// cpp-httplib client for "http://host:port" or "https://host" base URLs.
/// Throws UsageError for a malformed URL.
std::shared_ptr<HttpTransport> make_http_transport(const std::string& base_url,
                                                   double timeout_seconds);

}  // namespace scc::llm
