#include "scc/retrieval/export.hpp"

#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"

namespace scc::retrieval {

nlohmann::json to_json(const DemonstrationSet& set) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : set.entries) {
        entries.push_back({{"id", e.id}, {"semantic_distance", e.semantic_distance}, {"mixed_score", e.mixed_score}});
    }
    return {{"query_id", set.query_id}, {"entries", std::move(entries)}, {"short", set.short_result}};
}

DemonstrationSet from_json(const nlohmann::json& j, const corpus::Corpus& train) {
    DemonstrationSet set;
    try {
        set.query_id = j.at("query_id").get<std::string>();
        set.short_result = j.value("short", false);
        for (const auto& e : j.at("entries")) {
            Demonstration d;
            d.id = e.at("id").get<std::string>();
            d.semantic_distance = e.at("semantic_distance").get<double>();
            d.mixed_score = e.at("mixed_score").get<double>();
            const auto* pair = train.find(d.id);
            if (pair == nullptr) throw DataError("demonstration id \"" + d.id + "\" not in train corpus");
            d.code = pair->code;
            d.comment = pair->comment;
            set.entries.push_back(std::move(d));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed demonstration record: ") + e.what());
    }
    return set;
}

void write_demonstrations(std::span<const DemonstrationSet> sets, const std::filesystem::path& path) {
    std::string text;
    for (const auto& s : sets) text += to_json(s).dump() + "\n";
    write_file_atomic(path, text);
}

std::vector<DemonstrationSet> read_demonstrations(const std::filesystem::path& path,
                                                  const corpus::Corpus& train) {
    std::vector<DemonstrationSet> out;
    for_each_jsonl(path, [&](std::size_t, const nlohmann::json& j) { out.push_back(from_json(j, train)); });
    return out;
}

}  // namespace scc::retrieval
