#include "scc/eval/human_study.hpp"

#include <algorithm>
#include <fstream>

#include "scc/common/error.hpp"
#include "scc/common/rng.hpp"

namespace scc::eval {

namespace {

std::string label_for(std::size_t i) {
    std::string out;
    ++i;
    while (i > 0) {
        --i;
        out.insert(out.begin(), static_cast<char>('A' + i % 26));
        i /= 26;
    }
    return out;
}

int score_field(const json& j, const char* name, std::size_t line) {
    if (!j.contains(name) || !j[name].is_number_integer()) {
        throw DataError("ratings line " + std::to_string(line) + ": missing integer field '" + name + "'");
    }
    return j[name].get<int>();
}

void check_score(const RatingRecord& r, const char* name, int value) {
    if (value < 1 || value > 5) {
        throw DataError("rating for item '" + r.item + "' (" + r.approach + "): " + name + " score " +
                        std::to_string(value) + " is outside 1..5");
    }
}

}  // namespace

Questionnaire export_questionnaire(const corpus::Corpus& test, const ApproachOutputs& outputs,
                                   std::size_t count, std::uint64_t seed) {
    if (outputs.empty()) throw UsageError("questionnaire: no approaches given");
    if (count > test.size()) {
        throw UsageError("questionnaire: sample count " + std::to_string(count) + " exceeds " +
                         std::to_string(test.size()) + " test items");
    }
    std::vector<std::string> ids;
    for (const auto& p : test) ids.push_back(p.id);
    std::sort(ids.begin(), ids.end());

    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(ids.size() - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(count);

    Questionnaire q;
    for (const auto& id : ids) {
        std::vector<std::string> approaches;
        for (const auto& [name, by_id] : outputs) {
            if (!by_id.contains(id)) {
                throw DataError("questionnaire: approach '" + name + "' has no output for '" + id + "'");
            }
            approaches.push_back(name);
        }
        Rng item_rng(derive_seed(seed, id));
        item_rng.shuffle(std::span<std::string>(approaches));

        const auto* pair = test.find(id);
        QuestionnaireForm form{id, pair->code, pair->comment, {}};
        auto& labels = q.label_map[id];
        for (std::size_t i = 0; i < approaches.size(); ++i) {
            const auto label = label_for(i);
            form.comments.push_back({label, outputs.at(approaches[i]).at(id)});
            labels[label] = approaches[i];
        }
        q.forms.push_back(std::move(form));
    }
    return q;
}

void write_questionnaire(const Questionnaire& q, const std::filesystem::path& forms_path,
                         const std::filesystem::path& label_map_path) {
    std::string forms;
    for (const auto& f : q.forms) {
        json comments = json::array();
        for (const auto& c : f.comments) comments.push_back({{"label", c.label}, {"comment", c.text}});
        forms += json{{"item", f.item}, {"code", f.code}, {"ground_truth", f.ground_truth}, {"comments", comments}}.dump();
        forms += '\n';
    }
    write_file_atomic(forms_path, forms);
    write_file_atomic(label_map_path, json(q.label_map).dump(2) + "\n");
}

std::vector<RatingSummary> aggregate_ratings(const std::vector<RatingRecord>& records) {
    std::map<std::string, RatingSummary> acc;
    for (const auto& r : records) {
        check_score(r, "similarity", r.similarity);
        check_score(r, "naturalness", r.naturalness);
        check_score(r, "informativeness", r.informativeness);
        auto& s = acc[r.approach];
        s.approach = r.approach;
        ++s.count;
        s.similarity += r.similarity;
        s.naturalness += r.naturalness;
        s.informativeness += r.informativeness;
    }
    std::vector<RatingSummary> out;
    for (auto& [_, s] : acc) {
        const auto n = static_cast<double>(s.count);
        s.similarity /= n;
        s.naturalness /= n;
        s.informativeness /= n;
        out.push_back(s);
    }
    return out;
}

std::vector<RatingRecord> read_ratings(const std::filesystem::path& path,
                                       const std::filesystem::path* label_map_path) {
    json label_map;
    if (label_map_path != nullptr) {
        try {
            label_map = json::parse(read_file(*label_map_path));
        } catch (const json::exception& e) {
            throw DataError("label map " + label_map_path->string() + ": " + e.what());
        }
    }
    std::vector<RatingRecord> out;
    for_each_jsonl(path, [&](std::size_t line, const json& j) {
        RatingRecord r;
        if (!j.is_object() || !j.contains("item") || !j["item"].is_string()) {
            throw DataError("ratings line " + std::to_string(line) + ": missing string field 'item'");
        }
        r.item = j["item"].get<std::string>();
        if (j.contains("approach") && j["approach"].is_string()) {
            r.approach = j["approach"].get<std::string>();
        } else if (j.contains("label") && j["label"].is_string()) {
            if (label_map.is_null()) {
                throw UsageError("ratings line " + std::to_string(line) + " uses blinded labels; a label map is required");
            }
            const auto label = j["label"].get<std::string>();
            if (!label_map.contains(r.item) || !label_map[r.item].contains(label)) {
                throw DataError("ratings line " + std::to_string(line) + ": label '" + label + "' unknown for item '" +
                                r.item + "'");
            }
            r.approach = label_map[r.item][label].get<std::string>();
        } else {
            throw DataError("ratings line " + std::to_string(line) + ": needs 'approach' or 'label'");
        }
        r.similarity = score_field(j, "similarity", line);
        r.naturalness = score_field(j, "naturalness", line);
        r.informativeness = score_field(j, "informativeness", line);
        out.push_back(std::move(r));
    });
    return out;
}

json to_json(const std::vector<RatingSummary>& summary) {
    json out = json::array();
    for (const auto& s : summary) {
        out.push_back({{"approach", s.approach}, {"count", s.count}, {"similarity", s.similarity},
                       {"naturalness", s.naturalness}, {"informativeness", s.informativeness}});
    }
    return out;
}

}  // namespace scc::eval
