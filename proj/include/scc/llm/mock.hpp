#pragma once

#include <map>
#include <string>

#include "scc/llm/backend.hpp"
#include "scc/promptgen/prompt.hpp"

namespace scc::llm {

enum class MockBehavior { echo_top1, fixed, truncate_ground_truth };

/// Offline backend with deterministic output.
class MockBackend final : public LlmBackend {
public:
    /// Returns the comment of the most similar demo in the prompt, or "" for
    /// prompts without demos. `order` must match how the prompt was rendered.
    static MockBackend echo_top1(promptgen::DemoOrder order = promptgen::DemoOrder::most_similar_last);
    static MockBackend fixed(std::string text);
    /// Looks up the request tag and truncates that comment to the prompt's
    /// word cap. Unknown tags throw DataError.
    static MockBackend truncate_ground_truth(std::map<std::string, std::string> references);

    LlmResponse complete(const LlmRequest& request) override;
    std::string_view name() const noexcept override { return "mock"; }
    MockBehavior behavior() const noexcept { return behavior_; }

private:
    explicit MockBackend(MockBehavior behavior) : behavior_(behavior) {}

    MockBehavior behavior_;
    promptgen::DemoOrder order_ = promptgen::DemoOrder::most_similar_last;
    std::string fixed_;
    std::map<std::string, std::string> references_;
};

}  // namespace scc::llm
