#include "scc/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/common/rng.hpp"
#include "scc/corpus/tokenize.hpp"

namespace scc::corpus {

std::string_view to_string(Split split) noexcept {
    switch (split) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "?";
}

std::optional<Split> parse_split(std::string_view text) noexcept {
    if (text == "train") return Split::train;
    if (text == "validation") return Split::validation;
    if (text == "test") return Split::test;
    return std::nullopt;
}

std::string_view to_string(RemovalRule rule) noexcept {
    switch (rule) {
        case RemovalRule::dup_comment: return "dup_comment";
        case RemovalRule::template_comment: return "template";
        case RemovalRule::short_text: return "short";
    }
    return "?";
}

Corpus::Corpus(std::vector<CodeCommentPair> pairs) {
    pairs_.reserve(pairs.size());
    for (auto& p : pairs) add(std::move(p));
}

void Corpus::add(CodeCommentPair pair) {
    auto [it, inserted] = index_.emplace(pair.id, pairs_.size());
    if (!inserted) throw DataError("duplicate id \"" + pair.id + "\"");
    pairs_.push_back(std::move(pair));
}

const CodeCommentPair* Corpus::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &pairs_[it->second];
}

Corpus Corpus::subset(Split split) const {
    Corpus out;
    for (const auto& p : pairs_) {
        if (p.split == split) out.add(p);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

json to_json(const CodeCommentPair& p) {
    json j = {{"id", p.id}, {"code", p.code}, {"comment", p.comment}};
    if (p.split) j["split"] = std::string(to_string(*p.split));
    return j;
}

// Returns an error message, or nothing when the record is well formed.
std::optional<std::string> parse_record(const std::string& line, CodeCommentPair& out) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error&) {
        return "invalid JSON";
    }
    if (!j.is_object()) return "expected a JSON object";
    for (const auto& [key, value] : j.items()) {
        if (key != "id" && key != "code" && key != "comment" && key != "split") {
            return "unexpected field \"" + key + "\"";
        }
    }
    for (const char* field : {"id", "code", "comment"}) {
        if (!j.contains(field)) return std::string("missing field \"") + field + "\"";
        if (!j[field].is_string()) return std::string("field \"") + field + "\" is not a string";
    }
    out.id = j["id"].get<std::string>();
    out.code = j["code"].get<std::string>();
    out.comment = j["comment"].get<std::string>();
    if (out.id.empty()) return "empty id";
    if (out.code.empty()) return "empty code";
    if (out.comment.empty()) return "empty comment";
    out.split.reset();
    if (j.contains("split")) {
        if (!j["split"].is_string()) return "field \"split\" is not a string";
        auto s = parse_split(j["split"].get<std::string>());
        if (!s) return "unknown split \"" + j["split"].get<std::string>() + "\"";
        out.split = s;
    }
    return std::nullopt;
}

}  // namespace

IngestResult ingest(std::istream& in) {
    IngestResult result;
    std::map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        CodeCommentPair pair;
        if (auto err = parse_record(line, pair)) {
            result.issues.push_back({line_no, *err});
            continue;
        }
        auto [it, inserted] = first_line.emplace(pair.id, line_no);
        if (!inserted) {
            throw DataError("duplicate id \"" + pair.id + "\" on lines " +
                            std::to_string(it->second) + " and " + std::to_string(line_no));
        }
        result.corpus.add(std::move(pair));
    }
    if (in.bad()) throw DataError("read failure while ingesting corpus");
    return result;
}

IngestResult ingest_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return ingest(in);
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const auto& p : corpus) out << to_json(p).dump() << '\n';
}

void save(const Corpus& corpus, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_jsonl(corpus, out);
    if (!out) throw DataError("write failure on " + path.string());
}

Corpus load(const std::filesystem::path& path) {
    auto result = ingest_file(path);
    if (!result.issues.empty()) {
        const auto& issue = result.issues.front();
        throw DataError(path.string() + ":" + std::to_string(issue.line) + ": " + issue.message);
    }
    return std::move(result.corpus);
}

// ---------------------------------------------------------------------------

std::string normalize_code(std::string_view code) {
    std::string out;
    out.reserve(code.size());
    for (char c : code) {
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') {
            out.push_back(c);
        }
    }
    return out;
}

CleanResult clean(const Corpus& corpus, const CleanOptions& options) {
    if (options.dup_code_threshold < 2 || options.template_freq_threshold < 2) {
        throw UsageError("clean: thresholds must be >= 2");
    }
    if (options.min_words < 0) throw UsageError("clean: min_words must be >= 0");

    std::map<std::string_view, std::set<std::string>> bodies_by_comment;
    std::map<std::string_view, std::size_t> comment_freq;
    for (const auto& p : corpus) {
        bodies_by_comment[p.comment].insert(normalize_code(p.code));
        ++comment_freq[p.comment];
    }

    CleanResult result;
    for (const auto& p : corpus) {
        std::optional<RemovalRule> rule;
        if (bodies_by_comment[p.comment].size() >=
            static_cast<std::size_t>(options.dup_code_threshold)) {
            rule = RemovalRule::dup_comment;
        } else if (comment_freq[p.comment] >=
                   static_cast<std::size_t>(options.template_freq_threshold)) {
            rule = RemovalRule::template_comment;
        } else if (options.min_words > 0) {
            const auto& text =
                options.min_words_target == WordFilterTarget::comment ? p.comment : p.code;
            if (count_words(text) < static_cast<std::size_t>(options.min_words)) {
                rule = RemovalRule::short_text;
            }
        }
        if (rule) {
            result.removed.push_back({p, *rule});
        } else {
            result.corpus.add(p);
        }
    }
    return result;
}

void write_removal_report(std::span<const RemovedPair> removed, std::ostream& out) {
    for (const auto& r : removed) {
        json j = to_json(r.pair);
        j["rule"] = std::string(to_string(r.rule));
        out << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------

Corpus split(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed) {
    const double sum = ratios.train + ratios.validation + ratios.test;
    if (std::abs(sum - 1.0) > 1e-9 || ratios.train < 0 || ratios.validation < 0 || ratios.test < 0) {
        throw UsageError("split: ratios must be nonnegative and sum to 1");
    }
    const std::size_t n = corpus.size();
    if (n < 3) throw DataError("split: corpus has fewer than 3 pairs");

    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& p : corpus) ids.push_back(p.id);
    std::sort(ids.begin(), ids.end());
    Rng rng(seed);
    rng.shuffle(std::span<std::string>(ids));

    // small epsilon so that e.g. 0.1 * 29720 lands on 2972, not 2971
    auto floor_size = [n](double ratio) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
    };
    const std::size_t n_val = floor_size(ratios.validation);
    const std::size_t n_test = floor_size(ratios.test);

    std::unordered_map<std::string, Split> assignment;
    for (std::size_t i = 0; i < n; ++i) {
        Split s = Split::train;
        if (i < n_val) {
            s = Split::validation;
        } else if (i < n_val + n_test) {
            s = Split::test;
        }
        assignment.emplace(ids[i], s);
    }

    Corpus out;
    for (const auto& p : corpus) {
        auto tagged = p;
        tagged.split = assignment.at(p.id);
        out.add(std::move(tagged));
    }
    return out;
}

const SplitStats& CorpusStats::of(Split split) const {
    switch (split) {
        case Split::train: return train;
        case Split::validation: return validation;
        case Split::test: return test;
    }
    return train;
}

CorpusStats stats(const Corpus& corpus) {
    struct Acc {
        std::size_t count = 0;
        double code_tokens = 0;
        double comment_tokens = 0;
    };
    Acc acc[3];
    for (const auto& p : corpus) {
        if (!p.split) throw DataError("stats: pair \"" + p.id + "\" has no split tag");
        auto& a = acc[static_cast<int>(*p.split)];
        ++a.count;
        a.code_tokens += static_cast<double>(count_words(p.code));
        a.comment_tokens += static_cast<double>(count_words(p.comment));
    }
    auto finish = [](const Acc& a) {
        SplitStats s;
        s.count = a.count;
        if (a.count > 0) {
            s.avg_code_tokens = a.code_tokens / static_cast<double>(a.count);
            s.avg_comment_tokens = a.comment_tokens / static_cast<double>(a.count);
        }
        return s;
    };
    return {finish(acc[0]), finish(acc[1]), finish(acc[2])};
}

}  // namespace scc::corpus
