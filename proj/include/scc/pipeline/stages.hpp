#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scc/corpus/corpus.hpp"
#include "scc/eval/metrics.hpp"
#include "scc/eval/wilcoxon.hpp"
#include "scc/llm/backend.hpp"
#include "scc/promptgen/prompt.hpp"
#include "scc/retrieval/retrieval.hpp"
#include "scc/semantic/embedding.hpp"
#include "scc/semantic/whitening.hpp"

namespace scc::pipeline {

/// Train-side state shared by every query.
struct RetrievalContext {
    corpus::Corpus train;
    corpus::Corpus queries;
    const semantic::EmbeddingMatrix* embeddings = nullptr;  // covers train and queries
    retrieval::RetrievalIndex index;
};

RetrievalContext make_context(const corpus::Corpus& split_corpus, corpus::Split query_split,
                              const semantic::EmbeddingMatrix& embeddings, const semantic::WhiteningModel& model,
                              codeform::LexMode lex_mode = codeform::LexMode::subtokens);

retrieval::Query make_query(const corpus::CodeCommentPair& pair, const semantic::EmbeddingMatrix& embeddings);

std::vector<retrieval::DemonstrationSet> retrieve_all(const RetrievalContext& ctx,
                                                      const retrieval::RetrievalConfig& config);

/// reuse-top1 baseline output for every query.
std::vector<std::string> reuse_top1_all(const RetrievalContext& ctx, const retrieval::RetrievalConfig& config);

struct PromptRecord {
    std::string id;
    promptgen::RenderedPrompt prompt;
};

std::vector<PromptRecord> render_all(const corpus::Corpus& queries,
                                     const std::vector<retrieval::DemonstrationSet>& demos,
                                     const promptgen::PromptTemplate& tmpl, const promptgen::PromptOptions& options);

json to_json(const PromptRecord& record);
PromptRecord prompt_from_json(const json& j);

struct GenerationSettings {
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::size_t max_tokens = 64;
    std::size_t concurrency = 4;
};

struct GeneratedComment {
    std::string id;
    std::string comment;
    bool cache_hit = false;
};

/// Runs every prompt through the backend using up to `concurrency` worker
/// threads. Output order follows the prompts; the first failure (by prompt
/// order) is rethrown after all workers stop.
std::vector<GeneratedComment> generate_all(llm::LlmBackend& backend, const std::vector<PromptRecord>& prompts,
                                           const GenerationSettings& settings);

struct SignificanceResult {
    std::optional<eval::WilcoxonResult> result;
    std::string error;
};

struct BaselineComparison {
    std::string name;
    eval::MetricReport report;
    std::map<std::string, SignificanceResult> wilcoxon;  // keyed by metric name
};

struct EvaluationOutcome {
    eval::MetricReport report;
    std::vector<BaselineComparison> baselines;
};

/// Scores the generated comments against the query references and tests each
/// baseline against them on all four per-sample metrics.
EvaluationOutcome evaluate_outputs(const corpus::Corpus& queries, const std::map<std::string, std::string>& generated,
                                   const std::map<std::string, std::map<std::string, std::string>>& baselines);

json to_json(const EvaluationOutcome& outcome);

struct AblationRow {
    std::string label;
    eval::MetricReport report;
};

/// One row per shot count; 0 renders zero-shot prompts, 1 one-shot, more
/// few-shot with k equal to the shot count.
std::vector<AblationRow> shot_sweep(const RetrievalContext& ctx, const retrieval::RetrievalConfig& base,
                                    const std::vector<std::size_t>& shots, const promptgen::PromptTemplate& tmpl,
                                    const promptgen::PromptOptions& prompt_options, llm::LlmBackend& backend,
                                    const GenerationSettings& settings);

/// One row per retrieval strategy at the configured k.
std::vector<AblationRow> strategy_sweep(const RetrievalContext& ctx, const retrieval::RetrievalConfig& base,
                                        const std::vector<retrieval::Strategy>& strategies,
                                        const promptgen::PromptTemplate& tmpl,
                                        const promptgen::PromptOptions& prompt_options, llm::LlmBackend& backend,
                                        const GenerationSettings& settings);

json to_json(const std::vector<AblationRow>& rows);
std::string format_table(const std::vector<AblationRow>& rows, const std::string& first_column);

}  // namespace scc::pipeline

namespace scc::pipeline {

struct PipelineSpec {
    std::size_t D = 768;
    std::size_t d = 256;
    retrieval::RetrievalConfig retrieval;
    corpus::CleanOptions clean;
    corpus::SplitRatios ratios;
    std::uint64_t split_seed = 0;
    promptgen::PromptOptions prompt;
    GenerationSettings generation;
    /// Pre-computed vectors for every corpus id; unset uses the hashing embedder.
    const semantic::EmbeddingMatrix* embeddings = nullptr;
};

struct PipelineRun {
    corpus::Corpus cleaned;
    std::vector<corpus::RemovedPair> removed;
    corpus::Corpus split;
    semantic::EmbeddingMatrix embeddings;
    semantic::WhiteningModel model;
    std::vector<retrieval::DemonstrationSet> demos;
    std::vector<PromptRecord> prompts;
    std::vector<GeneratedComment> generated;
    std::vector<std::string> reuse_top1;
    EvaluationOutcome evaluation;
};

/// clean -> split -> embed -> whiten (train) -> retrieve -> prompt ->
/// generate -> evaluate (test queries, reuse-top1 baseline).
PipelineRun run_pipeline(const corpus::Corpus& corpus, const PipelineSpec& spec, llm::LlmBackend& backend);

}  // namespace scc::pipeline
