#include "scc/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "scc/common/error.hpp"

namespace scc::eval {

namespace {

using Tokens = std::vector<std::string>;
using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts ngram_counts(const Tokens& tokens, std::size_t n) {
    NgramCounts counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::vector<std::string_view> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
        ++counts[gram];
    }
    return counts;
}

std::size_t clipped_overlap(const NgramCounts& cand, const NgramCounts& ref) {
    std::size_t overlap = 0;
    for (const auto& [gram, count] : cand) {
        const auto it = ref.find(gram);
        if (it != ref.end()) overlap += std::min(count, it->second);
    }
    return overlap;
}

std::size_t ngram_total(std::size_t length, std::size_t n) { return length >= n ? length - n + 1 : 0; }

double f1_percent(std::size_t overlap, std::size_t cand_total, std::size_t ref_total) {
    if (overlap == 0 || cand_total == 0 || ref_total == 0) return 0.0;
    const double p = static_cast<double>(overlap) / static_cast<double>(cand_total);
    const double r = static_cast<double>(overlap) / static_cast<double>(ref_total);
    return 100.0 * 2.0 * p * r / (p + r);
}

double brevity_penalty(std::size_t cand_len, std::size_t ref_len) {
    if (cand_len == 0) return 0.0;
    if (cand_len > ref_len) return 1.0;
    return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void check_lists(std::span<const std::string> candidates, std::span<const std::string> references) {
    if (candidates.size() != references.size()) {
        throw UsageError("metrics: " + std::to_string(candidates.size()) + " candidates vs " +
                         std::to_string(references.size()) + " references");
    }
    if (candidates.empty()) throw UsageError("metrics: no candidate/reference pairs");
}

}  // namespace

std::vector<std::string> metric_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            flush();
        } else {
            cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
        }
    }
    flush();
    return out;
}

double bleu4(std::span<const std::string> candidates, std::span<const std::string> references) {
    check_lists(candidates, references);
    std::size_t matches[4] = {0, 0, 0, 0};
    std::size_t totals[4] = {0, 0, 0, 0};
    std::size_t cand_len = 0, ref_len = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto c = metric_tokens(candidates[i]);
        const auto r = metric_tokens(references[i]);
        cand_len += c.size();
        ref_len += r.size();
        for (std::size_t n = 1; n <= 4; ++n) {
            matches[n - 1] += clipped_overlap(ngram_counts(c, n), ngram_counts(r, n));
            totals[n - 1] += ngram_total(c.size(), n);
        }
    }
    double log_sum = 0.0;
    for (std::size_t n = 0; n < 4; ++n) {
        if (matches[n] == 0 || totals[n] == 0) return 0.0;
        log_sum += std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
    }
    return 100.0 * brevity_penalty(cand_len, ref_len) * std::exp(log_sum / 4.0);
}

double sentence_bleu4(std::string_view candidate, std::string_view reference) {
    const auto c = metric_tokens(candidate);
    const auto r = metric_tokens(reference);
    if (c.empty()) return 0.0;
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto m = clipped_overlap(ngram_counts(c, n), ngram_counts(r, n));
        const auto total = std::max<std::size_t>(1, ngram_total(c.size(), n));
        if (n == 1) {
            if (m == 0) return 0.0;
            log_sum += std::log(static_cast<double>(m) / static_cast<double>(total));
        } else {
            log_sum += std::log(static_cast<double>(m + 1) / static_cast<double>(total + 1));
        }
    }
    return 100.0 * brevity_penalty(c.size(), r.size()) * std::exp(log_sum / 4.0);
}

double rouge_n(std::string_view candidate, std::string_view reference, int n) {
    if (n != 1 && n != 2) throw UsageError("rouge_n: n must be 1 or 2");
    const auto c = metric_tokens(candidate);
    const auto r = metric_tokens(reference);
    const auto un = static_cast<std::size_t>(n);
    return f1_percent(clipped_overlap(ngram_counts(c, un), ngram_counts(r, un)), ngram_total(c.size(), un),
                      ngram_total(r.size(), un));
}

double rouge_l(std::string_view candidate, std::string_view reference) {
    const auto c = metric_tokens(candidate);
    const auto r = metric_tokens(reference);
    return f1_percent(lcs_length(c, r), c.size(), r.size());
}

MetricReport evaluate(std::span<const std::string> ids, std::span<const std::string> candidates,
                      std::span<const std::string> references) {
    check_lists(candidates, references);
    if (ids.size() != candidates.size()) throw UsageError("metrics: id count does not match candidates");
    MetricReport report;
    report.bleu4 = bleu4(candidates, references);
    report.per_sample.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        SampleScores s;
        s.id = ids[i];
        s.bleu4 = sentence_bleu4(candidates[i], references[i]);
        s.rouge1 = rouge_n(candidates[i], references[i], 1);
        s.rouge2 = rouge_n(candidates[i], references[i], 2);
        s.rougeL = rouge_l(candidates[i], references[i]);
        report.rouge1 += s.rouge1;
        report.rouge2 += s.rouge2;
        report.rougeL += s.rougeL;
        report.per_sample.push_back(std::move(s));
    }
    const auto n = static_cast<double>(ids.size());
    report.rouge1 /= n;
    report.rouge2 /= n;
    report.rougeL /= n;
    return report;
}

json to_json(const MetricReport& report) {
    json samples = json::array();
    for (const auto& s : report.per_sample) {
        samples.push_back({{"id", s.id}, {"bleu4", s.bleu4}, {"rouge1", s.rouge1}, {"rouge2", s.rouge2}, {"rougeL", s.rougeL}});
    }
    return json{{"bleu4", report.bleu4}, {"rouge1", report.rouge1}, {"rouge2", report.rouge2},
                {"rougeL", report.rougeL}, {"n", report.n()}, {"per_sample", samples}};
}

MetricReport report_from_json(const json& j) {
    try {
        MetricReport r;
        r.bleu4 = j.at("bleu4").get<double>();
        r.rouge1 = j.at("rouge1").get<double>();
        r.rouge2 = j.at("rouge2").get<double>();
        r.rougeL = j.at("rougeL").get<double>();
        for (const auto& s : j.at("per_sample")) {
            r.per_sample.push_back({s.at("id").get<std::string>(), s.at("bleu4").get<double>(),
                                    s.at("rouge1").get<double>(), s.at("rouge2").get<double>(),
                                    s.at("rougeL").get<double>()});
        }
        if (j.at("n").get<std::size_t>() != r.per_sample.size()) throw DataError("metric report: n does not match per_sample");
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("metric report: ") + e.what());
    }
}

std::string_view to_string(Metric m) noexcept {
    switch (m) {
        case Metric::bleu4: return "bleu4";
        case Metric::rouge1: return "rouge1";
        case Metric::rouge2: return "rouge2";
        case Metric::rougeL: return "rougeL";
    }
    return "?";
}

std::vector<double> per_sample_column(const MetricReport& report, Metric m) {
    std::vector<double> out;
    out.reserve(report.per_sample.size());
    for (const auto& s : report.per_sample) {
        switch (m) {
            case Metric::bleu4: out.push_back(s.bleu4); break;
            case Metric::rouge1: out.push_back(s.rouge1); break;
            case Metric::rouge2: out.push_back(s.rouge2); break;
            case Metric::rougeL: out.push_back(s.rougeL); break;
        }
    }
    return out;
}

}  // namespace scc::eval
