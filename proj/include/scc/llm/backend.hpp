#pragma once

#include <string_view>

#include "scc/llm/request.hpp"

namespace scc::llm {

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual LlmResponse complete(const LlmRequest& request) = 0;
    virtual std::string_view name() const noexcept = 0;
};

}  // namespace scc::llm
