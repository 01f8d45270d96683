#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scc/retrieval/retrieval.hpp"

namespace scc::retrieval {

/// {query_id, entries:[{id, semantic_distance, mixed_score}], short}
nlohmann::json to_json(const DemonstrationSet& set);

/// Restores ids and scores; code and comment are filled from `train`.
/// Throws DataError for an id missing from the corpus.
DemonstrationSet from_json(const nlohmann::json& j, const corpus::Corpus& train);

void write_demonstrations(std::span<const DemonstrationSet> sets, const std::filesystem::path& path);
std::vector<DemonstrationSet> read_demonstrations(const std::filesystem::path& path,
                                                  const corpus::Corpus& train);

}  // namespace scc::retrieval
