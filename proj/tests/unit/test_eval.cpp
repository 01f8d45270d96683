#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "../support/helpers.hpp"
#include "../support/oracles.hpp"
#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/eval/human_study.hpp"
#include "scc/eval/metrics.hpp"
#include "scc/eval/sampling.hpp"
#include "scc/eval/wilcoxon.hpp"

using namespace scc;
using namespace scc::eval;

namespace {

nlohmann::json fixture(const std::string& name) {
    return nlohmann::json::parse(read_file(testing::fixture_dir() / name));
}

std::string random_text(std::mt19937_64& rng, std::size_t max_words) {
    static const char* vocab[] = {"the", "owner", "token", "sets", "a", "balance", "of", "to", "returns", ","};
    std::string out;
    const std::size_t n = rng() % (max_words + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += vocab[rng() % 10];
    }
    return out;
}

corpus::Corpus test_corpus(std::size_t n) {
    corpus::Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = "t" + std::to_string(i);
        c.add({id, "function f" + std::to_string(i) + "() public {}", "comment " + id, corpus::Split::test});
    }
    return c;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("metric tokenizer") {
    CHECK(metric_tokens("Returns the Owner's balance.") ==
          std::vector<std::string>{"returns", "the", "owner's", "balance."});
    CHECK(metric_tokens("  a\tb\n").size() == 2);
    CHECK(metric_tokens("").empty());
    CHECK(metric_tokens("msg.sender , X") == std::vector<std::string>{"msg.sender", ",", "x"});
}

TEST_CASE("BLEU and ROUGE agree with reference implementations") {
    const auto fx = fixture("metrics.json");
    std::vector<std::string> cands, refs;
    for (const auto& p : fx.at("pairs")) {
        const std::string c = p.at("candidate"), r = p.at("reference");
        CAPTURE(c);
        CHECK(sentence_bleu4(c, r) == doctest::Approx(p.at("sentence_bleu4").get<double>()).epsilon(0).scale(0).epsilon(1e-6));
        CHECK(std::fabs(rouge_n(c, r, 1) - p.at("rouge1").get<double>()) <= 1e-4);
        CHECK(std::fabs(rouge_n(c, r, 2) - p.at("rouge2").get<double>()) <= 1e-4);
        CHECK(std::fabs(rouge_l(c, r) - p.at("rougeL").get<double>()) <= 1e-4);
        CHECK(std::fabs(sentence_bleu4(c, r) - p.at("sentence_bleu4").get<double>()) <= 1e-4);
        cands.push_back(c);
        refs.push_back(r);
    }
    CHECK(std::fabs(bleu4(cands, refs) - fx.at("corpus_bleu4").get<double>()) <= 1e-4);
    const std::vector<std::string> c1{"the cat sat on the mat"}, r1{"the cat is on the mat"};
    CHECK(std::fabs(bleu4(c1, r1) - fx.at("cat_mat_bleu4").get<double>()) <= 1e-4);
}

TEST_CASE("BLEU edge cases") {
    const std::vector<std::string> same{"returns the balance of the owner", "sets the fee rate"};
    CHECK(bleu4(same, same) == doctest::Approx(100.0));
    CHECK(bleu4(std::vector<std::string>{"alpha beta gamma delta"}, std::vector<std::string>{"one two three four"}) == 0.0);
    CHECK_THROWS_AS(bleu4(std::vector<std::string>{}, std::vector<std::string>{}), UsageError);
    CHECK_THROWS_AS(bleu4(std::vector<std::string>{"a"}, std::vector<std::string>{}), UsageError);
    CHECK(sentence_bleu4("", "a b c") == 0.0);
}

TEST_CASE("ROUGE-2 can exceed ROUGE-1 under F1") {
    const std::string c = "to token to balance balance owner owner sets a sets returns", r = "a the of a sets a";
    CHECK(rouge_n(c, r, 1) == doctest::Approx(400.0 / 17.0));
    CHECK(rouge_n(c, r, 2) == doctest::Approx(400.0 / 15.0));
}

TEST_CASE("ROUGE worked examples") {
    CHECK(rouge_n("the cat", "the cat sat", 1) == doctest::Approx(80.0));
    CHECK(rouge_l("a b c d", "a c d") == doctest::Approx(600.0 / 7.0));
    CHECK(rouge_n("same text here", "same text here", 1) == doctest::Approx(100.0));
    CHECK(rouge_n("same text here", "same text here", 2) == doctest::Approx(100.0));
    CHECK(rouge_l("same text here", "same text here") == doctest::Approx(100.0));
    CHECK(rouge_n("x y", "a b", 1) == 0.0);
    CHECK(rouge_l("x y", "a b") == 0.0);
    CHECK(rouge_n("", "", 1) == 0.0);
    CHECK_THROWS_AS(rouge_n("a", "a", 3), UsageError);
}

TEST_CASE("ROUGE orderings hold on random pairs") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const auto c = random_text(rng, 12), r = random_text(rng, 12);
        const double r1 = rouge_n(c, r, 1), r2 = rouge_n(c, r, 2), rl = rouge_l(c, r);
        // clipped bigram matches never exceed unigram matches, but the bigram
        // F1 denominator is two smaller, so rouge2 may exceed rouge1
        const double lc = static_cast<double>(metric_tokens(c).size());
        const double lr = static_cast<double>(metric_tokens(r).size());
        if (lc + lr > 2) CHECK(r2 <= r1 * (lc + lr) / (lc + lr - 2) + 1e-9);
        CHECK(rl <= r1 + 1e-9);
        for (double v : {r1, r2, rl, sentence_bleu4(c, r)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 100.0 + 1e-9);
        }
    }
}

TEST_CASE("evaluate and report serialisation") {
    const std::vector<std::string> ids{"a", "b"}, c{"the owner", "sets fee"}, r{"the owner", "sets the fee"};
    const auto report = evaluate(ids, c, r);
    CHECK(report.n() == 2);
    CHECK(report.per_sample[0].id == "a");
    CHECK(report.per_sample[0].rouge1 == doctest::Approx(100.0));
    CHECK(report.rouge1 == doctest::Approx((report.per_sample[0].rouge1 + report.per_sample[1].rouge1) / 2));
    CHECK(report.bleu4 == doctest::Approx(bleu4(c, r)));
    CHECK(report_from_json(to_json(report)) == report);
    CHECK(per_sample_column(report, Metric::rougeL).size() == 2);
    CHECK(to_string(Metric::rouge2) == "rouge2");
    CHECK_THROWS_AS(evaluate(std::vector<std::string>{"a"}, c, r), UsageError);
}

TEST_CASE("Wilcoxon matches full enumeration on small vectors") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> grid(0, 6);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(8), b(8);
        for (int i = 0; i < 8; ++i) {
            a[i] = grid(rng);
            b[i] = grid(rng);
        }
        std::size_t nonzero = 0;
        for (int i = 0; i < 8; ++i) nonzero += a[i] != b[i];
        if (nonzero < kWilcoxonMinPairs) continue;
        const auto res = wilcoxon_signed_rank(a, b);
        CHECK(res.exact);
        CHECK(res.n_nonzero == nonzero);
        CHECK(std::fabs(res.p_value - std::min(1.0, oracle::wilcoxon_enumerated(a, b))) <= 1e-6);
        CHECK(res.w_plus + res.w_minus == doctest::Approx(nonzero * (nonzero + 1) / 2.0));
    }
    const std::vector<double> a{1.8, 2.4, 3.1, 0.5, 4.2, 2.2, 3.3, 1.1}, b{1.0, 2.9, 2.0, 0.1, 3.0, 2.5, 1.9, 0.4};
    CHECK(std::fabs(wilcoxon_signed_rank(a, b).p_value - oracle::wilcoxon_enumerated(a, b)) <= 1e-6);
}

TEST_CASE("Wilcoxon agrees with scipy") {
    for (const auto& c : fixture("wilcoxon.json").at("wilcoxon")) {
        CAPTURE(c.at("name").get<std::string>());
        const auto a = c.at("a").get<std::vector<double>>(), b = c.at("b").get<std::vector<double>>();
        const auto res = wilcoxon_signed_rank(a, b);
        CHECK(res.exact == (c.at("method") == "exact"));
        CHECK(std::fabs(res.p_value - c.at("p_value").get<double>()) <= 1e-6);
    }
}

TEST_CASE("Wilcoxon errors and strong effects") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    CHECK(testing::contains(testing::thrown_message<UsageError>([&] { wilcoxon_signed_rank(x, x); }),
                            "no nonzero differences"));
    const std::vector<double> y{1, 2, 3, 4, 5, 6.5, 7.5};
    CHECK(testing::contains(testing::thrown_message<UsageError>([&] { wilcoxon_signed_rank(x, y); }),
                            "need at least 6"));
    CHECK_THROWS_AS(wilcoxon_signed_rank(x, std::vector<double>{1}), UsageError);
    std::vector<double> hi, lo;
    for (int i = 0; i < 20; ++i) {
        lo.push_back(i);
        hi.push_back(i + 1 + 0.1 * i);
    }
    CHECK(wilcoxon_signed_rank(hi, lo).p_value < 0.05);
    std::vector<double> big_hi, big_lo;
    for (int i = 0; i < 40; ++i) {
        big_lo.push_back(i);
        big_hi.push_back(i + 0.5 + 0.01 * i);
    }
    const auto approx = wilcoxon_signed_rank(big_hi, big_lo);
    CHECK_FALSE(approx.exact);
    CHECK(approx.p_value < 1e-6);
}

TEST_CASE("sample size") {
    CHECK(sample_size(2972) == 340);
    CHECK(sample_size(1e9) == 384);
    CHECK(sample_size(1) == 1);
    CHECK(SampleSizeParams{.size = 10}.n0() == doctest::Approx(384.16));
    CHECK_THROWS_AS(sample_size(0), UsageError);
    CHECK_THROWS_AS(sample_size(100, 0.0), UsageError);
}

TEST_CASE("questionnaire export is blinded and seeded") {
    const auto test = test_corpus(10);
    ApproachOutputs outputs;
    for (const auto& p : test) {
        outputs["ours"][p.id] = "ours for " + p.id;
        outputs["baseline"][p.id] = "baseline for " + p.id;
    }
    const auto q = export_questionnaire(test, outputs, 3, 17);
    REQUIRE(q.forms.size() == 3);
    std::set<std::string> items;
    for (const auto& f : q.forms) {
        items.insert(f.item);
        REQUIRE(f.comments.size() == 2);
        CHECK(f.comments[0].label == "A");
        CHECK(f.comments[1].label == "B");
        CHECK(f.ground_truth == test.find(f.item)->comment);
        const auto& labels = q.label_map.at(f.item);
        for (const auto& c : f.comments) CHECK(outputs.at(labels.at(c.label)).at(f.item) == c.text);
    }
    CHECK(items.size() == 3);
    const auto again = export_questionnaire(test, outputs, 3, 17);
    CHECK(again.label_map == q.label_map);
    for (std::size_t i = 0; i < 3; ++i) CHECK(again.forms[i].item == q.forms[i].item);

    // across many items both label orders occur
    const auto all = export_questionnaire(test, outputs, 10, 17);
    std::set<std::string> first_labels;
    for (const auto& [item, m] : all.label_map) first_labels.insert(m.at("A"));
    CHECK(first_labels.size() == 2);

    outputs["baseline"].erase("t4");
    const auto msg = testing::thrown_message<DataError>([&] { export_questionnaire(test, outputs, 10, 17); });
    CHECK(testing::contains(msg, "t4"));
    CHECK_THROWS_AS(export_questionnaire(test, outputs, 11, 17), UsageError);
    CHECK_THROWS_AS(export_questionnaire(test, {}, 1, 17), UsageError);
}

TEST_CASE("rating aggregation") {
    const auto one = aggregate_ratings({{"i", "x", 3, 4, 5}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].similarity == 3.0);
    CHECK(one[0].naturalness == 4.0);
    CHECK(one[0].informativeness == 5.0);
    const auto two = aggregate_ratings({{"i", "x", 1, 1, 1}, {"j", "x", 5, 5, 5}, {"i", "a", 2, 2, 2}});
    REQUIRE(two.size() == 2);
    CHECK(two[0].approach == "a");
    CHECK(two[1].count == 2);
    CHECK(two[1].similarity == 3.0);
    CHECK(two[1].informativeness == 3.0);
    CHECK_THROWS_AS(aggregate_ratings({{"i", "x", 6, 1, 1}}), DataError);
    CHECK_THROWS_AS(aggregate_ratings({{"i", "x", 1, 0, 1}}), DataError);
}

TEST_CASE("ratings are read by approach or through the label map") {
    const auto test = test_corpus(4);
    ApproachOutputs outputs;
    for (const auto& p : test) {
        outputs["ours"][p.id] = "o";
        outputs["base"][p.id] = "b";
    }
    const auto q = export_questionnaire(test, outputs, 2, 3);
    testing::TempDir dir;
    write_questionnaire(q, dir / "forms.jsonl", dir / "labels.json");
    const auto item = q.forms[0].item;
    {
        std::ofstream out(dir / "ratings.jsonl");
        out << nlohmann::json{{"item", item}, {"label", "A"}, {"similarity", 4}, {"naturalness", 5}, {"informativeness", 3}}.dump() << "\n";
        out << nlohmann::json{{"item", item}, {"approach", "base"}, {"similarity", 2}, {"naturalness", 2}, {"informativeness", 2}}.dump() << "\n";
    }
    const auto labels = dir / "labels.json";
    const auto records = read_ratings(dir / "ratings.jsonl", &labels);
    REQUIRE(records.size() == 2);
    CHECK(records[0].approach == q.label_map.at(item).at("A"));
    CHECK(records[1].approach == "base");
    CHECK_THROWS_AS(read_ratings(dir / "ratings.jsonl", nullptr), Error);
    const auto j = to_json(aggregate_ratings(records));
    CHECK(j.is_array());
}

}  // TEST_SUITE
