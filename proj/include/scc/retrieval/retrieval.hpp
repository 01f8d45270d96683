#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scc/codeform/similarity.hpp"
#include "scc/corpus/corpus.hpp"
#include "scc/semantic/embedding.hpp"
#include "scc/semantic/search.hpp"
#include "scc/semantic/whitening.hpp"

namespace scc::retrieval {

enum class Strategy {
    full,           // whitened top-n, reranked by mixed score
    random,         // seeded uniform sample of k
    no_whitening,   // raw-embedding top-n, reranked by mixed score
    semantic_only,  // whitened top-k, no rerank
};

std::string_view to_string(Strategy s) noexcept;
/// Accepts both "no_whitening" and "no-whitening" spellings.
std::optional<Strategy> parse_strategy(std::string_view text) noexcept;

struct RetrievalConfig {
    std::size_t n = 10;
    std::size_t k = 5;
    double lambda = 0.7;
    Strategy strategy = Strategy::full;
    std::uint64_t seed = 0;

    /// Throws UsageError unless 1 <= k <= n and 0 <= lambda <= 1.
    void validate() const;
};

struct Demonstration {
    std::string id;
    std::string code;
    std::string comment;
    double semantic_distance = 0.0;
    double mixed_score = 0.0;
};

struct DemonstrationSet {
    std::string query_id;
    std::vector<Demonstration> entries;
    /// Fewer than k candidates were available.
    bool short_result = false;
};

struct Query {
    std::string id;
    std::string code;
    std::span<const float> embedding;  // raw, length D
};

/// Immutable retrieval state over the training corpus: raw and whitened
/// vectors plus precomputed structural/lexical views. Safe for concurrent
/// queries.
class RetrievalIndex {
public:
    /// Throws DataError if any train id lacks an embedding or dimensions disagree.
    RetrievalIndex(const corpus::Corpus& train, const semantic::EmbeddingMatrix& embeddings,
                   semantic::WhiteningModel model,
                   codeform::LexMode lex_mode = codeform::LexMode::subtokens);

    std::size_t size() const noexcept { return entries_.size(); }
    const semantic::WhiteningModel& model() const noexcept { return model_; }

    DemonstrationSet retrieve(const Query& query, const RetrievalConfig& config) const;

    /// Comment of the best full-strategy demonstration. Throws DataError when
    /// no candidate exists.
    std::string reuse_top1(const Query& query, const RetrievalConfig& config) const;

    /// Stage-1 ranking on whitened vectors (query id excluded).
    std::vector<semantic::Neighbor> stage1(const Query& query, std::size_t n) const;

private:
    struct Entry {
        std::string id;
        std::string code;
        std::string comment;
        codeform::CodeView view;
    };

    Demonstration make_demo(std::size_t row, double distance, double mixed) const;
    std::vector<Demonstration> rerank(const Query& query, std::span<const semantic::Neighbor> candidates,
                                      const RetrievalConfig& config) const;

    semantic::WhiteningModel model_;
    codeform::LexMode lex_mode_;
    std::vector<Entry> entries_;  // sorted by id
    semantic::DenseIndex<float> raw_;
    semantic::DenseIndex<double> whitened_;
};

}  // namespace scc::retrieval
