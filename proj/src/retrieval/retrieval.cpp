#include "scc/retrieval/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "scc/common/error.hpp"
#include "scc/common/rng.hpp"

namespace scc::retrieval {

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::full: return "full";
        case Strategy::random: return "random";
        case Strategy::no_whitening: return "no-whitening";
        case Strategy::semantic_only: return "semantic-only";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) noexcept {
    if (text == "full") return Strategy::full;
    if (text == "random") return Strategy::random;
    if (text == "no-whitening" || text == "no_whitening") return Strategy::no_whitening;
    if (text == "semantic-only" || text == "semantic_only") return Strategy::semantic_only;
    return std::nullopt;
}

void RetrievalConfig::validate() const {
    if (k < 1 || k > n) {
        throw UsageError("retrieval: need 1 <= k <= n, got k=" + std::to_string(k) +
                         " n=" + std::to_string(n));
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw UsageError("retrieval: lambda must lie in [0, 1]");
    }
}

RetrievalIndex::RetrievalIndex(const corpus::Corpus& train,
                               const semantic::EmbeddingMatrix& embeddings,
                               semantic::WhiteningModel model, codeform::LexMode lex_mode)
    : model_(std::move(model)), lex_mode_(lex_mode) {
    if (embeddings.dim() != model_.input_dim) {
        throw DataError("retrieval: embeddings have dimension " + std::to_string(embeddings.dim()) +
                        ", whitening model expects " + std::to_string(model_.input_dim));
    }
    std::vector<const corpus::CodeCommentPair*> pairs;
    for (const auto& p : train) pairs.push_back(&p);
    std::sort(pairs.begin(), pairs.end(), [](auto* a, auto* b) { return a->id < b->id; });

    raw_.dim = embeddings.dim();
    whitened_.dim = model_.output_dim;
    entries_.reserve(pairs.size());
    for (const auto* p : pairs) {
        const auto row = embeddings.find(p->id);
        if (!row) throw DataError("retrieval: no embedding for train id \"" + p->id + "\"");
        const auto raw = embeddings.row(*row);
        raw_.ids.push_back(p->id);
        raw_.data.insert(raw_.data.end(), raw.begin(), raw.end());
        auto w = model_.apply(raw);
        whitened_.ids.push_back(p->id);
        whitened_.data.insert(whitened_.data.end(), w.begin(), w.end());
        entries_.push_back({p->id, p->code, p->comment, codeform::make_view(p->code, lex_mode_)});
    }
}

std::vector<semantic::Neighbor> RetrievalIndex::stage1(const Query& query, std::size_t n) const {
    const auto q = model_.apply(query.embedding);
    return semantic::top_n(whitened_, std::span<const double>(q), n, query.id);
}

Demonstration RetrievalIndex::make_demo(std::size_t row, double distance, double mixed) const {
    const auto& e = entries_[row];
    return {e.id, e.code, e.comment, distance, mixed};
}

std::vector<Demonstration> RetrievalIndex::rerank(const Query& query,
                                                  std::span<const semantic::Neighbor> candidates,
                                                  const RetrievalConfig& config) const {
    const auto view = codeform::make_view(query.code, lex_mode_);
    std::vector<Demonstration> scored;
    scored.reserve(candidates.size());
    for (const auto& c : candidates) {
        const double mixed = codeform::compare(view, entries_[c.row].view, config.lambda).mixed;
        scored.push_back(make_demo(c.row, c.distance, mixed));
    }
    std::sort(scored.begin(), scored.end(), [](const Demonstration& a, const Demonstration& b) {
        if (a.mixed_score != b.mixed_score) return a.mixed_score > b.mixed_score;
        return a.id < b.id;
    });
    return scored;
}

DemonstrationSet RetrievalIndex::retrieve(const Query& query, const RetrievalConfig& config) const {
    config.validate();
    if (query.embedding.size() != model_.input_dim) {
        throw DataError("retrieval: query \"" + query.id + "\" embedding has length " +
                        std::to_string(query.embedding.size()) + ", expected " +
                        std::to_string(model_.input_dim));
    }
    DemonstrationSet out;
    out.query_id = query.id;

    switch (config.strategy) {
        case Strategy::full: {
            const auto candidates = stage1(query, config.n);
            out.entries = rerank(query, candidates, config);
            break;
        }
        case Strategy::no_whitening: {
            const auto candidates = semantic::top_n(raw_, query.embedding, config.n, query.id);
            out.entries = rerank(query, candidates, config);
            break;
        }
        case Strategy::semantic_only: {
            const auto candidates = stage1(query, config.k);
            const auto view = codeform::make_view(query.code, lex_mode_);
            for (const auto& c : candidates) {
                const double mixed = codeform::compare(view, entries_[c.row].view, config.lambda).mixed;
                out.entries.push_back(make_demo(c.row, c.distance, mixed));
            }
            break;
        }
        case Strategy::random: {
            std::vector<std::size_t> rows;
            for (std::size_t r = 0; r < entries_.size(); ++r) {
                if (entries_[r].id != query.id) rows.push_back(r);
            }
            Rng rng(derive_seed(config.seed, query.id));
            // partial Fisher-Yates: the first k slots become the sample
            const std::size_t take = std::min(config.k, rows.size());
            for (std::size_t i = 0; i < take; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(rows.size() - i));
                std::swap(rows[i], rows[j]);
            }
            const auto q = model_.apply(query.embedding);
            const auto view = codeform::make_view(query.code, lex_mode_);
            for (std::size_t i = 0; i < take; ++i) {
                const std::size_t r = rows[i];
                const double dist = semantic::semantic_distance(whitened_.row(r), q);
                const double mixed = codeform::compare(view, entries_[r].view, config.lambda).mixed;
                out.entries.push_back(make_demo(r, dist, mixed));
            }
            break;
        }
    }
    if (out.entries.size() > config.k) out.entries.resize(config.k);
    out.short_result = out.entries.size() < config.k;
    return out;
}

std::string RetrievalIndex::reuse_top1(const Query& query, const RetrievalConfig& config) const {
    RetrievalConfig full = config;
    full.strategy = Strategy::full;
    const auto set = retrieve(query, full);
    if (set.entries.empty()) throw DataError("reuse_top1: no candidates for query \"" + query.id + "\"");
    return set.entries.front().comment;
}

}  // namespace scc::retrieval
