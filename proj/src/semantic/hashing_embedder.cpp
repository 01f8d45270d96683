#include "scc/semantic/hashing_embedder.hpp"

#include <cmath>

#include "scc/common/error.hpp"
#include "scc/common/rng.hpp"
#include "scc/corpus/tokenize.hpp"

namespace scc::semantic {

std::vector<float> HashingEmbedder::embed(std::string_view code) const {
    std::vector<double> acc(dim_, 0.0);
    const auto tokens = corpus::tokenize_identifiers(code).tokens;
    auto bump = [&](std::string_view feature, double weight) {
        const std::uint64_t h = fnv1a64(feature);
        const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
        acc[static_cast<std::size_t>(h % dim_)] += sign * weight;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        bump(tokens[i], 1.0);
        if (i + 1 < tokens.size()) bump(tokens[i] + "\x1f" + tokens[i + 1], 0.5);
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<float> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = static_cast<float>(norm > 0.0 ? acc[i] / norm : 0.0);
    }
    return out;
}

EmbeddingMatrix HashingEmbedder::embed_all(std::span<const std::string> ids,
                                           std::span<const std::string> codes) const {
    if (ids.size() != codes.size()) throw UsageError("embed_all: ids and codes differ in length");
    std::vector<float> data;
    data.reserve(ids.size() * dim_);
    for (const auto& code : codes) {
        auto v = embed(code);
        data.insert(data.end(), v.begin(), v.end());
    }
    return EmbeddingMatrix(std::vector<std::string>(ids.begin(), ids.end()), dim_, std::move(data));
}

}  // namespace scc::semantic
