#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>

#include "scc/corpus/corpus.hpp"
#include "scc/llm/transport.hpp"
#include "scc/semantic/embedding.hpp"

namespace scc::pipeline {

inline constexpr std::size_t kMaxEmbedBatch = 64;

struct EmbedServiceOptions {
    std::string pooling = "first_last_avg";
    std::size_t max_length = 256;
    std::size_t batch_size = kMaxEmbedBatch;
    std::size_t expected_dim = 768;
};

/// POSTs batches to /embed and assembles the rows in corpus order. Non-200
/// replies, shape mismatches and non-finite values throw RemoteError.
semantic::EmbeddingMatrix embed_via_service(llm::HttpTransport& transport, const corpus::Corpus& corpus,
                                            const EmbedServiceOptions& options = {});

/// Loads vectors produced elsewhere, either an SCEB file or JSON lines of
/// {"id", "vector"}, and returns the rows for the corpus ids in corpus order.
/// Missing ids throw DataError.
semantic::EmbeddingMatrix import_embeddings(const std::filesystem::path& path, const corpus::Corpus& corpus);

/// Keeps the rows whose ids appear in the corpus, in corpus order.
semantic::EmbeddingMatrix select_rows(const semantic::EmbeddingMatrix& m, const corpus::Corpus& corpus);

}  // namespace scc::pipeline
