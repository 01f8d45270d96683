#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scc/common/jsonl.hpp"

namespace scc::pipeline {

inline constexpr const char* kToolVersion = "0.1.0";

struct FileDigest {
    std::string path;
    std::string sha256;
};

FileDigest digest_file(const std::filesystem::path& path);

struct StageRecord {
    std::string name;
    std::vector<FileDigest> outputs;
};

/// Provenance for one pipeline run.
struct RunManifest {
    json config;
    std::vector<FileDigest> inputs;
    std::string tool_version = kToolVersion;
    json seeds = json::object();
    std::string started_at;
    std::string finished_at;
    std::vector<StageRecord> stages;
};

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const json& j);
void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

}  // namespace scc::pipeline
