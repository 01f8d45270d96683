#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scc/common/jsonl.hpp"

namespace scc::eval {

/// Lowercases ASCII letters and splits on whitespace.
std::vector<std::string> metric_tokens(std::string_view text);

/// Corpus BLEU-4 (uniform weights, brevity penalty, no smoothing), as a
/// percentage. Throws UsageError on empty or mismatched inputs.
double bleu4(std::span<const std::string> candidates, std::span<const std::string> references);

/// Sentence BLEU-4 for per-sample scores. Orders 2..4 use (matches + 1) /
/// (total + 1); unigram precision stays unsmoothed.
double sentence_bleu4(std::string_view candidate, std::string_view reference);

/// ROUGE-N F1 percentage with clipped n-gram counts. n must be 1 or 2.
double rouge_n(std::string_view candidate, std::string_view reference, int n);

/// LCS-based ROUGE-L F1 percentage.
double rouge_l(std::string_view candidate, std::string_view reference);

struct SampleScores {
    std::string id;
    double bleu4 = 0.0;
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;

    bool operator==(const SampleScores&) const = default;
};

struct MetricReport {
    double bleu4 = 0.0;
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
    std::vector<SampleScores> per_sample;

    std::size_t n() const noexcept { return per_sample.size(); }
    bool operator==(const MetricReport&) const = default;
};

/// Scores aligned candidate/reference lists; ids label the per-sample rows.
MetricReport evaluate(std::span<const std::string> ids, std::span<const std::string> candidates,
                      std::span<const std::string> references);

json to_json(const MetricReport& report);
MetricReport report_from_json(const json& j);

enum class Metric { bleu4, rouge1, rouge2, rougeL };
inline constexpr Metric kAllMetrics[] = {Metric::bleu4, Metric::rouge1, Metric::rouge2, Metric::rougeL};
std::string_view to_string(Metric m) noexcept;
std::vector<double> per_sample_column(const MetricReport& report, Metric m);

}  // namespace scc::eval
