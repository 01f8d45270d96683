#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scc/semantic/embedding.hpp"

namespace scc::semantic {

/// Offline stand-in for the encoder service: a signed feature-hashing bag of
/// identifier subtokens and subtoken bigrams, L2-normalised. Deterministic and
/// dependency-free, so it keeps the pipeline runnable without a model.
class HashingEmbedder {
public:
    explicit HashingEmbedder(std::size_t dim = 768) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::vector<float> embed(std::string_view code) const;

    EmbeddingMatrix embed_all(std::span<const std::string> ids,
                              std::span<const std::string> codes) const;

private:
    std::size_t dim_;
};

}  // namespace scc::semantic
