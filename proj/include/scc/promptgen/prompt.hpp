#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scc/retrieval/retrieval.hpp"

namespace scc::promptgen {

enum class ShotMode { zero, one, few };

std::string_view to_string(ShotMode mode) noexcept;
std::optional<ShotMode> parse_shot_mode(std::string_view text) noexcept;

enum class DemoOrder {
    most_similar_last,   // the best demonstration sits next to the query
    most_similar_first,
};

enum class CapStyle {
    word_count,  // "... should not exceed 12 words"
    literal,     // "... should not exceed <top-1 comment text>"
};

/// Prompt text with {DEMOS}, {QUERY} and {CAP} placeholders. Each must appear
/// exactly once.
class PromptTemplate {
public:
    explicit PromptTemplate(std::string text);

    static PromptTemplate standard();
    static PromptTemplate load(const std::filesystem::path& path);

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

struct PromptOptions {
    ShotMode mode = ShotMode::few;
    DemoOrder order = DemoOrder::most_similar_last;
    CapStyle cap_style = CapStyle::word_count;
    std::size_t zero_shot_cap_words = 15;
    /// Maximum estimated tokens; unset means unlimited.
    std::optional<std::size_t> budget;
};

struct RenderedPrompt {
    std::string text;
    std::size_t demo_count = 0;
    std::size_t length_cap_words = 0;
    std::size_t estimated_tokens = 0;
    /// Demonstrations removed to satisfy the budget, least similar first.
    std::vector<std::string> dropped_ids;
};

/// ceil(1.3 * whitespace word count).
std::size_t estimate_tokens(std::string_view text);

/// Renders the instruction header, the demonstrations (each comment line
/// prefixed with '#', followed by the code verbatim) and the query block with
/// its length cap. `demos` must be ordered most similar first, as retrieval
/// returns them. one-shot uses only demos[0]; few-shot uses all of them.
/// When options.budget is set this delegates to enforce_budget.
RenderedPrompt build_prompt(const PromptTemplate& tmpl, std::string_view query_code,
                            std::span<const retrieval::Demonstration> demos,
                            const PromptOptions& options);

/// Drops the least similar remaining demonstration until the estimate fits.
/// The query block is never dropped; throws UsageError when the header and
/// query alone exceed the budget.
RenderedPrompt enforce_budget(const PromptTemplate& tmpl, std::string_view query_code,
                              std::span<const retrieval::Demonstration> demos,
                              const PromptOptions& options, std::size_t budget);

/// Reads the cap back out of a rendered prompt ("... exceed N words").
std::optional<std::size_t> parse_cap_words(std::string_view prompt);

/// Comments of the demo blocks in the order they appear in the prompt.
std::vector<std::string> parse_demo_comments(std::string_view prompt);

}  // namespace scc::promptgen
