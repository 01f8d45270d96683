#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scc::corpus {

enum class Split { train, validation, test };

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view text) noexcept;

/// One <method, comment> record.
struct CodeCommentPair {
    std::string id;
    std::string code;
    std::string comment;
    std::optional<Split> split;

    bool operator==(const CodeCommentPair&) const = default;
};

/// Ordered collection of pairs with unique ids. Immutable once built; safe to
/// read from many threads.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<CodeCommentPair> pairs);

    /// Throws DataError on a duplicate id.
    void add(CodeCommentPair pair);

    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    std::span<const CodeCommentPair> pairs() const noexcept { return pairs_; }
    auto begin() const noexcept { return pairs_.begin(); }
    auto end() const noexcept { return pairs_.end(); }
    const CodeCommentPair& operator[](std::size_t i) const { return pairs_[i]; }

    const CodeCommentPair* find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Pairs tagged with the given split, in corpus order.
    Corpus subset(Split split) const;

    bool operator==(const Corpus& other) const { return pairs_ == other.pairs_; }

private:
    std::vector<CodeCommentPair> pairs_;
    std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// ingestion

struct IngestIssue {
    std::size_t line = 0;
    std::string message;
};

struct IngestResult {
    Corpus corpus;
    std::vector<IngestIssue> issues;
};

/// Reads one JSON object per line with exactly the fields id, code, comment
/// and optionally split. Malformed lines are collected in `issues`; a
/// repeated id throws DataError naming the id and both line numbers.
IngestResult ingest(std::istream& in);
IngestResult ingest_file(const std::filesystem::path& path);

void write_jsonl(const Corpus& corpus, std::ostream& out);
void save(const Corpus& corpus, const std::filesystem::path& path);

/// Loads a corpus file, failing on the first malformed line.
Corpus load(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// cleaning

enum class RemovalRule { dup_comment, template_comment, short_text };

std::string_view to_string(RemovalRule rule) noexcept;

enum class WordFilterTarget { comment, code };

struct CleanOptions {
    int dup_code_threshold = 2;
    int template_freq_threshold = 20;
    /// Pairs whose target text has fewer whitespace words are removed; 0 disables.
    int min_words = 4;
    WordFilterTarget min_words_target = WordFilterTarget::comment;
};

struct RemovedPair {
    CodeCommentPair pair;
    RemovalRule rule;
};

struct CleanResult {
    Corpus corpus;
    std::vector<RemovedPair> removed;
};

CleanResult clean(const Corpus& corpus, const CleanOptions& options = {});

void write_removal_report(std::span<const RemovedPair> removed, std::ostream& out);

/// Removes all whitespace; two bodies differing only in layout compare equal.
std::string normalize_code(std::string_view code);

// ---------------------------------------------------------------------------
// splitting and statistics

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

/// Assigns splits by a seeded shuffle of the ids. Validation and test sizes
/// are floor(N * ratio); the remainder goes to train. The assignment depends
/// only on the id set and the seed, not on corpus order.
Corpus split(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed);

struct SplitStats {
    std::size_t count = 0;
    double avg_code_tokens = 0.0;
    double avg_comment_tokens = 0.0;
};

struct CorpusStats {
    SplitStats train;
    SplitStats validation;
    SplitStats test;

    const SplitStats& of(Split split) const;
    std::size_t total() const { return train.count + validation.count + test.count; }
};

/// Requires every pair to carry a split tag.
CorpusStats stats(const Corpus& corpus);

}  // namespace scc::corpus
