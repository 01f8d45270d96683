#include <doctest.h>

#include <fstream>
#include <json.hpp>

#include "../support/helpers.hpp"
#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/promptgen/prompt.hpp"

using namespace scc;
using namespace scc::promptgen;
using retrieval::Demonstration;

namespace {

struct GoldenInputs {
    std::string query;
    std::vector<Demonstration> demos;
    nlohmann::json tokens;
};

GoldenInputs golden_inputs() {
    const auto j = nlohmann::json::parse(read_file(testing::fixture_dir() / "golden" / "prompt_inputs.json"));
    GoldenInputs in;
    in.query = j.at("query");
    double score = 1.0;
    for (const auto& d : j.at("demos")) {
        in.demos.push_back({d.at("id"), d.at("code"), d.at("comment"), 0.0, score});
        score -= 0.1;
    }
    in.tokens = j.at("estimated_tokens");
    return in;
}

std::string golden(const std::string& name) { return read_file(testing::fixture_dir() / "golden" / name); }

std::size_t count_blocks(const std::string& text) {
    std::size_t n = 0;
    for (std::size_t pos = 0; (pos = text.find("\n\n#", pos)) != std::string::npos; ++pos) ++n;
    return n;
}

PromptOptions with_mode(ShotMode m) {
    PromptOptions o;
    o.mode = m;
    return o;
}

}  // namespace

TEST_SUITE("promptgen") {

TEST_CASE("rendered prompts match the golden files byte for byte") {
    const auto in = golden_inputs();
    const auto tmpl = PromptTemplate::standard();
    struct Case {
        const char* file;
        PromptOptions options;
        std::size_t demos;
    };
    PromptOptions first = with_mode(ShotMode::few);
    first.order = DemoOrder::most_similar_first;
    PromptOptions literal = with_mode(ShotMode::few);
    literal.cap_style = CapStyle::literal;
    const Case cases[] = {
        {"zero_shot.txt", with_mode(ShotMode::zero), 0},
        {"one_shot.txt", with_mode(ShotMode::one), 1},
        {"few_shot.txt", with_mode(ShotMode::few), 5},
        {"few_shot_most_similar_first.txt", first, 5},
        {"few_shot_literal_cap.txt", literal, 5},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        const auto p = build_prompt(tmpl, in.query, in.demos, c.options);
        CHECK(p.text == golden(c.file));
        CHECK(p.demo_count == c.demos);
        CHECK(count_blocks(p.text) == c.demos);
        CHECK(p.estimated_tokens == in.tokens.at(c.file).get<std::size_t>());
    }
}

TEST_CASE("cap clause") {
    const auto in = golden_inputs();
    const auto tmpl = PromptTemplate::standard();
    const auto zero = build_prompt(tmpl, in.query, in.demos, with_mode(ShotMode::zero));
    CHECK(zero.length_cap_words == 15);
    CHECK(testing::contains(zero.text, "The length should not exceed 15 words"));
    CHECK(parse_cap_words(zero.text) == 15);

    std::vector<Demonstration> twelve{{"x", "function x() public {}", "one two three four five six seven eight nine ten eleven twelve", 0, 1}};
    const auto p = build_prompt(tmpl, "function y() public {}", twelve, with_mode(ShotMode::few));
    CHECK(p.length_cap_words == 12);
    CHECK(testing::contains(p.text, "should not exceed 12 words"));
    CHECK(parse_cap_words(p.text) == 12);
    CHECK_FALSE(parse_cap_words("no cap here").has_value());
}

TEST_CASE("reversing the order flag reverses blocks only") {
    const auto in = golden_inputs();
    const auto tmpl = PromptTemplate::standard();
    auto last = with_mode(ShotMode::few);
    auto first = last;
    first.order = DemoOrder::most_similar_first;
    auto a = parse_demo_comments(build_prompt(tmpl, in.query, in.demos, last).text);
    const auto b = parse_demo_comments(build_prompt(tmpl, in.query, in.demos, first).text);
    REQUIRE(a.size() == 5);
    CHECK(a.back() == in.demos[0].comment);
    std::reverse(a.begin(), a.end());
    CHECK(a == b);
}

TEST_CASE("one and few shot require demonstrations") {
    const auto tmpl = PromptTemplate::standard();
    CHECK_THROWS_AS(build_prompt(tmpl, "function f() public {}", {}, with_mode(ShotMode::one)), UsageError);
    CHECK_THROWS_AS(build_prompt(tmpl, "function f() public {}", {}, with_mode(ShotMode::few)), UsageError);
    CHECK_NOTHROW(build_prompt(tmpl, "function f() public {}", {}, with_mode(ShotMode::zero)));
}

TEST_CASE("budget enforcement") {
    const auto in = golden_inputs();
    const auto tmpl = PromptTemplate::standard();
    const auto all = build_prompt(tmpl, in.query, in.demos, with_mode(ShotMode::few));

    auto generous = with_mode(ShotMode::few);
    generous.budget = 100000;
    const auto g = build_prompt(tmpl, in.query, in.demos, generous);
    CHECK(g.demo_count == 5);
    CHECK(g.dropped_ids.empty());
    CHECK(g.text == all.text);

    const std::span<const Demonstration> top2(in.demos.data(), 2);
    const auto two = build_prompt(tmpl, in.query, top2, with_mode(ShotMode::few));
    const auto three = build_prompt(tmpl, in.query, std::span<const Demonstration>(in.demos.data(), 3),
                                    with_mode(ShotMode::few));
    REQUIRE(two.estimated_tokens < three.estimated_tokens);
    auto tight = with_mode(ShotMode::few);
    tight.budget = two.estimated_tokens;
    const auto t = build_prompt(tmpl, in.query, in.demos, tight);
    CHECK(t.demo_count == 2);
    CHECK(t.dropped_ids == std::vector<std::string>{"d5", "d4", "d3"});
    const auto kept = parse_demo_comments(t.text);
    CHECK(kept == std::vector<std::string>{in.demos[1].comment, in.demos[0].comment});
    CHECK(t.length_cap_words == all.length_cap_words);

    auto tiny = with_mode(ShotMode::few);
    tiny.budget = 5;
    const auto msg = testing::thrown_message<UsageError>([&] { build_prompt(tmpl, in.query, in.demos, tiny); });
    CHECK(testing::contains(msg, "budget"));
}

TEST_CASE("estimated tokens grow with demo count") {
    const auto in = golden_inputs();
    const auto tmpl = PromptTemplate::standard();
    std::size_t prev = build_prompt(tmpl, in.query, in.demos, with_mode(ShotMode::zero)).estimated_tokens;
    for (std::size_t k = 1; k <= in.demos.size(); ++k) {
        const auto p = build_prompt(tmpl, in.query, std::span<const Demonstration>(in.demos.data(), k),
                                    with_mode(ShotMode::few));
        CHECK(p.estimated_tokens >= prev);
        prev = p.estimated_tokens;
    }
    CHECK(estimate_tokens("") == 0);
    CHECK(estimate_tokens("a") == 2);
    CHECK(estimate_tokens("a b c d e f g h i j") == 13);
}

TEST_CASE("templates") {
    CHECK_THROWS_AS(PromptTemplate("{DEMOS} {QUERY}"), UsageError);
    CHECK_THROWS_AS(PromptTemplate("{DEMOS}{DEMOS} {QUERY} {CAP}"), UsageError);
    const PromptTemplate custom("Q:{QUERY}|D:{DEMOS}|C:{CAP}");
    std::vector<Demonstration> one{{"a", "code()", "two words", 0, 1}};
    CHECK(build_prompt(custom, "q()", one, with_mode(ShotMode::one)).text ==
          "Q:q()|D:To alleviate the difficulty of this task, we will give you top-1 examples. "
          "Please learn from them.\n\n#two words\ncode()\n|C:2 words");
    testing::TempDir dir;
    std::ofstream(dir / "t.txt") << "{CAP}{QUERY}{DEMOS}";
    CHECK(PromptTemplate::load(dir / "t.txt").text() == "{CAP}{QUERY}{DEMOS}");
    CHECK(parse_shot_mode("few") == ShotMode::few);
    CHECK_FALSE(parse_shot_mode("many").has_value());
}

}  // TEST_SUITE
