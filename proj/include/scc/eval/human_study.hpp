#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scc/common/jsonl.hpp"
#include "scc/corpus/corpus.hpp"

namespace scc::eval {

/// approach name -> (item id -> generated comment)
using ApproachOutputs = std::map<std::string, std::map<std::string, std::string>>;

struct BlindedComment {
    std::string label;
    std::string text;
};

struct QuestionnaireForm {
    std::string item;
    std::string code;
    std::string ground_truth;
    std::vector<BlindedComment> comments;
};

struct Questionnaire {
    std::vector<QuestionnaireForm> forms;
    /// item id -> (label -> approach name)
    std::map<std::string, std::map<std::string, std::string>> label_map;
};

/// Samples `count` items from `test` with the seed, then shuffles the approach
/// order per item and assigns labels A, B, C, ... Throws DataError naming the
/// item when an approach lacks an output, UsageError when count exceeds the
/// test size or no approach is given.
Questionnaire export_questionnaire(const corpus::Corpus& test, const ApproachOutputs& outputs,
                                   std::size_t count, std::uint64_t seed);

void write_questionnaire(const Questionnaire& q, const std::filesystem::path& forms_path,
                         const std::filesystem::path& label_map_path);

struct RatingRecord {
    std::string item;
    std::string approach;
    int similarity = 0;
    int naturalness = 0;
    int informativeness = 0;
};

struct RatingSummary {
    std::string approach;
    std::size_t count = 0;
    double similarity = 0.0;
    double naturalness = 0.0;
    double informativeness = 0.0;
};

/// Per-approach arithmetic means, ordered by approach name. Throws DataError
/// for scores outside 1..5.
std::vector<RatingSummary> aggregate_ratings(const std::vector<RatingRecord>& records);

/// Reads one rating per line: {"item", "approach" | "label", "similarity",
/// "naturalness", "informativeness"}. Labels are resolved through the sealed
/// label map, which must then be supplied.
std::vector<RatingRecord> read_ratings(const std::filesystem::path& path,
                                       const std::filesystem::path* label_map_path);

json to_json(const std::vector<RatingSummary>& summary);

}  // namespace scc::eval
