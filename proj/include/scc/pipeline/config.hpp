#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "scc/common/jsonl.hpp"

namespace scc::pipeline {

/// Tool defaults. Keys in the INI file use the same names; sections are
/// accepted for grouping but do not namespace keys.
struct ToolConfig {
    std::size_t max_input_length = 256;
    std::size_t D = 768;
    std::size_t d = 256;
    double lambda = 0.7;
    std::size_t top_n = 10;
    std::size_t k = 5;
    std::uint64_t seed = 0;

    int dup_code_threshold = 2;
    int template_freq_threshold = 20;
    int min_words = 4;

    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::size_t max_tokens = 64;
    std::optional<std::size_t> budget;
    std::size_t max_in_flight = 4;
    std::string base_url = "https://api.openai.com";
    double timeout_seconds = 60.0;
};

/// Reads an INI file over the defaults. Unknown keys and unparsable values
/// throw UsageError.
ToolConfig load_config(const std::filesystem::path& path, ToolConfig base = {});

json to_json(const ToolConfig& config);
/// Inverse of to_json; absent keys keep their defaults, extra keys are ignored.
ToolConfig config_from_json(const json& j);

}  // namespace scc::pipeline
