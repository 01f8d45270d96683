#include "scc/llm/request.hpp"

#include "scc/common/error.hpp"

namespace scc::llm {

void LlmRequest::validate() const {
    if (prompt.empty()) throw UsageError("llm request: prompt is empty");
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw UsageError("llm request: temperature must be within [0, 2]");
    }
}

CacheKey cache_key(const LlmRequest& request) {
    const json fields = json::array({request.model, request.prompt, request.temperature, request.max_tokens});
    return sha256(fields.dump());
}

std::string postprocess(std::string_view raw) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    std::size_t b = 0, e = raw.size();
    while (b < e && is_space(raw[b])) ++b;
    while (e > b && is_space(raw[e - 1])) --e;
    std::string_view s = raw.substr(b, e - b);
    if (s.size() >= 2) {
        const char first = s.front();
        const char last = s.back();
        if ((first == '"' || first == '\'' || first == '`') && first == last) {
            s = s.substr(1, s.size() - 2);
            while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
            while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
        }
    }
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r' || s[i] == '\n') {
            while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
            while (i + 1 < s.size() && is_space(s[i + 1])) ++i;
            out += ' ';
        } else {
            out += s[i];
        }
    }
    return out;
}

json chat_body(const LlmRequest& request) {
    return json{{"model", request.model},
                {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
                {"temperature", request.temperature},
                {"max_tokens", request.max_tokens}};
}

}  // namespace scc::llm
