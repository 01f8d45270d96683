#include "scc/promptgen/prompt.hpp"

#include <charconv>

#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/corpus/tokenize.hpp"

namespace scc::promptgen {

namespace {

constexpr std::string_view kStandardTemplate =
    "To generate a short summarization in one sentence for smart contract code.\n"
    "{DEMOS}\n"
    "Target code:\n"
    "{QUERY}\n"
    "The length should not exceed {CAP}\n";

constexpr std::string_view kCapPrefix = "The length should not exceed ";

void replace_once(std::string& text, std::string_view key, std::string_view value) {
    const auto pos = text.find(key);
    text.replace(pos, key.size(), value);
}

std::string trim_trailing(std::string_view s) {
    std::size_t end = s.size();
    while (end > 0 && (s[end - 1] == '\n' || s[end - 1] == '\r' || s[end - 1] == ' ' || s[end - 1] == '\t')) {
        --end;
    }
    return std::string(s.substr(0, end));
}

std::string render_demo(const retrieval::Demonstration& d) {
    std::string out;
    std::string_view comment = d.comment;
    // every comment line gets its own '#'
    std::size_t start = 0;
    const std::string trimmed = trim_trailing(comment);
    comment = trimmed;
    while (start <= comment.size()) {
        auto nl = comment.find('\n', start);
        if (nl == std::string_view::npos) nl = comment.size();
        std::string_view line = comment.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out += "#";
        out += line;
        out += "\n";
        start = nl + 1;
    }
    out += trim_trailing(d.code);
    out += "\n";
    return out;
}

std::size_t selected_count(ShotMode mode, std::size_t available) {
    switch (mode) {
        case ShotMode::zero: return 0;
        case ShotMode::one: return std::min<std::size_t>(1, available);
        case ShotMode::few: return available;
    }
    return 0;
}

// Renders exactly demos[0..count) with the cap taken from `top1`.
RenderedPrompt render(const PromptTemplate& tmpl, std::string_view query_code,
                      std::span<const retrieval::Demonstration> demos, std::size_t count,
                      const retrieval::Demonstration* top1, const PromptOptions& options) {
    std::string demo_text;
    if (count > 0) {
        demo_text = "To alleviate the difficulty of this task, we will give you top-" +
                    std::to_string(count) + " examples. Please learn from them.\n";
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t idx = options.order == DemoOrder::most_similar_last ? count - 1 - i : i;
            demo_text += "\n";
            demo_text += render_demo(demos[idx]);
        }
    }

    RenderedPrompt out;
    std::string cap;
    if (top1 == nullptr) {
        out.length_cap_words = options.zero_shot_cap_words;
        cap = std::to_string(out.length_cap_words) + " words";
    } else {
        out.length_cap_words = corpus::count_words(top1->comment);
        if (options.cap_style == CapStyle::word_count) {
            cap = std::to_string(out.length_cap_words) + " words";
        } else {
            cap = trim_trailing(top1->comment);
        }
    }

    out.text = tmpl.text();
    replace_once(out.text, "{DEMOS}", demo_text);
    replace_once(out.text, "{QUERY}", trim_trailing(query_code));
    replace_once(out.text, "{CAP}", cap);
    out.demo_count = count;
    out.estimated_tokens = estimate_tokens(out.text);
    return out;
}

void check_mode(ShotMode mode, std::size_t available) {
    if (mode != ShotMode::zero && available == 0) {
        throw UsageError(std::string("prompt: ") + std::string(to_string(mode)) +
                         "-shot mode needs at least one demonstration");
    }
}

}  // namespace

std::string_view to_string(ShotMode mode) noexcept {
    switch (mode) {
        case ShotMode::zero: return "zero";
        case ShotMode::one: return "one";
        case ShotMode::few: return "few";
    }
    return "?";
}

std::optional<ShotMode> parse_shot_mode(std::string_view text) noexcept {
    if (text == "zero") return ShotMode::zero;
    if (text == "one") return ShotMode::one;
    if (text == "few") return ShotMode::few;
    return std::nullopt;
}

PromptTemplate::PromptTemplate(std::string text) : text_(std::move(text)) {
    for (std::string_view key : {"{DEMOS}", "{QUERY}", "{CAP}"}) {
        const auto first = text_.find(key);
        if (first == std::string::npos) {
            throw UsageError("prompt template: missing placeholder " + std::string(key));
        }
        if (text_.find(key, first + 1) != std::string::npos) {
            throw UsageError("prompt template: placeholder " + std::string(key) + " appears twice");
        }
    }
}

PromptTemplate PromptTemplate::standard() { return PromptTemplate(std::string(kStandardTemplate)); }

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
    return PromptTemplate(read_file(path));
}

std::size_t estimate_tokens(std::string_view text) {
    const std::size_t words = corpus::count_words(text);
    return (words * 13 + 9) / 10;
}

RenderedPrompt build_prompt(const PromptTemplate& tmpl, std::string_view query_code,
                            std::span<const retrieval::Demonstration> demos,
                            const PromptOptions& options) {
    if (options.budget) return enforce_budget(tmpl, query_code, demos, options, *options.budget);
    check_mode(options.mode, demos.size());
    const std::size_t count = selected_count(options.mode, demos.size());
    const auto* top1 = options.mode == ShotMode::zero ? nullptr : &demos[0];
    return render(tmpl, query_code, demos, count, top1, options);
}

RenderedPrompt enforce_budget(const PromptTemplate& tmpl, std::string_view query_code,
                              std::span<const retrieval::Demonstration> demos,
                              const PromptOptions& options, std::size_t budget) {
    check_mode(options.mode, demos.size());
    std::size_t count = selected_count(options.mode, demos.size());
    const auto* top1 = options.mode == ShotMode::zero ? nullptr : &demos[0];

    const auto bare = render(tmpl, query_code, demos, 0, top1, options);
    if (bare.estimated_tokens > budget) {
        throw UsageError("prompt: budget of " + std::to_string(budget) +
                         " tokens is smaller than the header and query (" +
                         std::to_string(bare.estimated_tokens) + ")");
    }
    std::vector<std::string> dropped;
    for (;;) {
        auto out = render(tmpl, query_code, demos, count, top1, options);
        if (out.estimated_tokens <= budget) {
            out.dropped_ids = std::move(dropped);
            return out;
        }
        --count;
        dropped.push_back(demos[count].id);
    }
}

std::optional<std::size_t> parse_cap_words(std::string_view prompt) {
    const auto pos = prompt.rfind(kCapPrefix);
    if (pos == std::string_view::npos) return std::nullopt;
    std::string_view rest = prompt.substr(pos + kCapPrefix.size());
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc() || ptr == rest.data()) return std::nullopt;
    if (std::string_view(ptr, static_cast<std::size_t>(rest.data() + rest.size() - ptr)).starts_with(" words")) {
        return value;
    }
    return std::nullopt;
}

std::vector<std::string> parse_demo_comments(std::string_view prompt) {
    std::vector<std::string> comments;
    std::string current;
    bool in_block = false;
    std::size_t start = 0;
    while (start < prompt.size()) {
        auto nl = prompt.find('\n', start);
        if (nl == std::string_view::npos) nl = prompt.size();
        const std::string_view line = prompt.substr(start, nl - start);
        if (line.starts_with("#")) {
            if (in_block) current += "\n";
            current += line.substr(1);
            in_block = true;
        } else if (in_block) {
            comments.push_back(std::move(current));
            current.clear();
            in_block = false;
        }
        start = nl + 1;
    }
    if (in_block) comments.push_back(std::move(current));
    return comments;
}

}  // namespace scc::promptgen
