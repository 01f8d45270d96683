#include "scc/pipeline/config.hpp"

#include <charconv>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "scc/common/error.hpp"

namespace scc::pipeline {

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError("config: invalid value '" + text + "' for " + key);
    }
    return value;
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

ToolConfig load_config(const std::filesystem::path& path, ToolConfig base) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw UsageError("config: cannot read " + path.string());

    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path.string());
    } catch (const CLI::Error& e) {
        throw UsageError("config: " + path.string() + ": " + e.what());
    }

    ToolConfig& c = base;
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"max_input_length", [&](auto& k, auto& v) { c.max_input_length = parse_number<std::size_t>(k, v); }},
        {"D", [&](auto& k, auto& v) { c.D = parse_number<std::size_t>(k, v); }},
        {"d", [&](auto& k, auto& v) { c.d = parse_number<std::size_t>(k, v); }},
        {"lambda", [&](auto& k, auto& v) { c.lambda = parse_number<double>(k, v); }},
        {"top_n", [&](auto& k, auto& v) { c.top_n = parse_number<std::size_t>(k, v); }},
        {"k", [&](auto& k, auto& v) { c.k = parse_number<std::size_t>(k, v); }},
        {"seed", [&](auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
        {"dup_code_threshold", [&](auto& k, auto& v) { c.dup_code_threshold = parse_number<int>(k, v); }},
        {"template_freq_threshold", [&](auto& k, auto& v) { c.template_freq_threshold = parse_number<int>(k, v); }},
        {"min_words", [&](auto& k, auto& v) { c.min_words = parse_number<int>(k, v); }},
        {"model", [&](auto&, auto& v) { c.model = v; }},
        {"temperature", [&](auto& k, auto& v) { c.temperature = parse_number<double>(k, v); }},
        {"max_tokens", [&](auto& k, auto& v) { c.max_tokens = parse_number<std::size_t>(k, v); }},
        {"budget", [&](auto& k, auto& v) { c.budget = parse_number<std::size_t>(k, v); }},
        {"max_in_flight", [&](auto& k, auto& v) { c.max_in_flight = parse_number<std::size_t>(k, v); }},
        {"base_url", [&](auto&, auto& v) { c.base_url = v; }},
        {"timeout_seconds", [&](auto& k, auto& v) { c.timeout_seconds = parse_number<double>(k, v); }},
    };

    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        const auto it = setters.find(item.name);
        if (it == setters.end()) throw UsageError("config: unknown key '" + item.name + "' in " + path.string());
        if (item.inputs.size() != 1) throw UsageError("config: key '" + item.name + "' needs exactly one value");
        it->second(item.name, unquote(item.inputs.front()));
    }
    return c;
}

json to_json(const ToolConfig& c) {
    json j{{"max_input_length", c.max_input_length},
           {"D", c.D},
           {"d", c.d},
           {"lambda", c.lambda},
           {"top_n", c.top_n},
           {"k", c.k},
           {"seed", c.seed},
           {"dup_code_threshold", c.dup_code_threshold},
           {"template_freq_threshold", c.template_freq_threshold},
           {"min_words", c.min_words},
           {"model", c.model},
           {"temperature", c.temperature},
           {"max_tokens", c.max_tokens},
           {"max_in_flight", c.max_in_flight},
           {"base_url", c.base_url},
           {"timeout_seconds", c.timeout_seconds}};
    j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
    return j;
}

ToolConfig config_from_json(const json& j) {
    if (!j.is_object()) throw DataError("config: expected a JSON object");
    ToolConfig c;
    auto get = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(field);
        } catch (const json::exception&) {
            throw DataError(std::string("config: invalid value for ") + key);
        }
    };
    get("max_input_length", c.max_input_length);
    get("D", c.D);
    get("d", c.d);
    get("lambda", c.lambda);
    get("top_n", c.top_n);
    get("k", c.k);
    get("seed", c.seed);
    get("dup_code_threshold", c.dup_code_threshold);
    get("template_freq_threshold", c.template_freq_threshold);
    get("min_words", c.min_words);
    get("model", c.model);
    get("temperature", c.temperature);
    get("max_tokens", c.max_tokens);
    get("max_in_flight", c.max_in_flight);
    get("base_url", c.base_url);
    get("timeout_seconds", c.timeout_seconds);
    if (j.contains("budget") && !j.at("budget").is_null()) {
        std::size_t b = 0;
        get("budget", b);
        c.budget = b;
    }
    return c;
}

}  // namespace scc::pipeline
