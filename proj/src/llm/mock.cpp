#include "scc/llm/mock.hpp"

#include "scc/common/error.hpp"
#include "scc/corpus/tokenize.hpp"

namespace scc::llm {

MockBackend MockBackend::echo_top1(promptgen::DemoOrder order) {
    MockBackend b(MockBehavior::echo_top1);
    b.order_ = order;
    return b;
}

MockBackend MockBackend::fixed(std::string text) {
    MockBackend b(MockBehavior::fixed);
    b.fixed_ = std::move(text);
    return b;
}

MockBackend MockBackend::truncate_ground_truth(std::map<std::string, std::string> references) {
    MockBackend b(MockBehavior::truncate_ground_truth);
    b.references_ = std::move(references);
    return b;
}

LlmResponse MockBackend::complete(const LlmRequest& request) {
    request.validate();
    std::string raw;
    switch (behavior_) {
        case MockBehavior::echo_top1: {
            const auto comments = promptgen::parse_demo_comments(request.prompt);
            if (!comments.empty()) {
                raw = order_ == promptgen::DemoOrder::most_similar_last ? comments.back() : comments.front();
            }
            break;
        }
        case MockBehavior::fixed:
            raw = fixed_;
            break;
        case MockBehavior::truncate_ground_truth: {
            const auto it = references_.find(request.tag);
            if (it == references_.end()) {
                throw DataError("mock backend: no reference comment for '" + request.tag + "'");
            }
            const auto words = corpus::split_words(it->second);
            const std::size_t cap = promptgen::parse_cap_words(request.prompt).value_or(words.size());
            for (std::size_t i = 0; i < words.size() && i < cap; ++i) {
                if (i) raw += ' ';
                raw += words[i];
            }
            break;
        }
    }
    LlmResponse out;
    out.text = postprocess(raw);
    out.usage.prompt_tokens = promptgen::estimate_tokens(request.prompt);
    out.usage.completion_tokens = promptgen::estimate_tokens(out.text);
    out.backend = "mock";
    return out;
}

}  // namespace scc::llm
