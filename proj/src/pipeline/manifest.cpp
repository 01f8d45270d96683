#include "scc/pipeline/manifest.hpp"

#include <chrono>
#include <ctime>

#include "scc/common/digest.hpp"
#include "scc/common/error.hpp"

namespace scc::pipeline {

namespace {

json digests_to_json(const std::vector<FileDigest>& files) {
    json out = json::array();
    for (const auto& f : files) out.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return out;
}

std::vector<FileDigest> digests_from_json(const json& j) {
    std::vector<FileDigest> out;
    for (const auto& f : j) out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    return out;
}

}  // namespace

FileDigest digest_file(const std::filesystem::path& path) {
    return {path.generic_string(), to_hex(sha256_file(path))};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json to_json(const RunManifest& m) {
    json stages = json::array();
    for (const auto& s : m.stages) stages.push_back({{"name", s.name}, {"outputs", digests_to_json(s.outputs)}});
    return json{{"tool_version", m.tool_version}, {"config", m.config},   {"seeds", m.seeds},
                {"inputs", digests_to_json(m.inputs)}, {"started_at", m.started_at},
                {"finished_at", m.finished_at}, {"stages", stages}};
}

RunManifest manifest_from_json(const json& j) {
    try {
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.config = j.at("config");
        m.seeds = j.at("seeds");
        m.inputs = digests_from_json(j.at("inputs"));
        m.started_at = j.at("started_at").get<std::string>();
        m.finished_at = j.at("finished_at").get<std::string>();
        for (const auto& s : j.at("stages")) {
            m.stages.push_back({s.at("name").get<std::string>(), digests_from_json(s.at("outputs"))});
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("manifest: ") + e.what());
    }
}

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    write_file_atomic(path, to_json(manifest).dump(2) + "\n");
}

RunManifest load_manifest(const std::filesystem::path& path) {
    try {
        return manifest_from_json(json::parse(read_file(path)));
    } catch (const json::parse_error& e) {
        throw DataError("manifest " + path.string() + ": " + e.what());
    }
}

}  // namespace scc::pipeline
