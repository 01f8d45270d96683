#include <doctest.h>

#include <cmath>
#include <fstream>
#include <algorithm>
#include <random>

#include "../support/helpers.hpp"
#include "../support/oracles.hpp"
#include "scc/codeform/sbt.hpp"
#include "scc/codeform/similarity.hpp"
#include "scc/codeform/solidity_lexer.hpp"
#include "scc/codeform/solidity_parser.hpp"
#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/corpus/corpus.hpp"

using namespace scc;
using namespace scc::codeform;

namespace {

using Seq = std::vector<std::string>;

SbtSequence seq(Seq tokens) { return SbtSequence{std::move(tokens), false}; }

Seq random_seq(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
    Seq s(rng() % (max_len + 1));
    for (auto& t : s) t = std::string(1, static_cast<char>('a' + rng() % alphabet));
    return s;
}

}  // namespace

TEST_SUITE("codeform") {

TEST_CASE("lexer classifies tokens and drops comments") {
    const auto toks = lex_solidity("uint256 x = 0x1F; // note\n/* block */ string s = \"a\\\"b\"; emit E();");
    CHECK(std::find_if(toks.begin(), toks.end(), [](const Token& t) { return t.is_keyword("emit"); }) != toks.end());
    REQUIRE(toks.back().kind == TokenKind::end);
    CHECK(toks[0].text == "uint256");
    CHECK(is_elementary_type(toks[0].text));
    CHECK(toks[1].is(TokenKind::identifier, "x"));
    CHECK(toks[2].is_punct("="));
    CHECK(toks[3].is(TokenKind::number, "0x1F"));
    CHECK(toks[4].is_punct(";"));
    CHECK(toks[5].text == "string");
    CHECK(toks[8].kind == TokenKind::string_literal);
    for (const auto& t : toks) CHECK(t.text.find("note") == std::string::npos);
}

TEST_CASE("lexer is total on odd input") {
    CHECK(lex_solidity("").size() == 1);
    const auto toks = lex_solidity("@ \"open");
    CHECK(toks[0].is_punct("@"));
    CHECK(toks[1].kind == TokenKind::string_literal);
}

TEST_CASE("parser accepts common definitions") {
    CHECK_NOTHROW(parse_solidity("function f() public {}"));
    CHECK_NOTHROW(parse_solidity("modifier onlyOwner() { require(msg.sender == owner, \"no\"); _; }"));
    CHECK_NOTHROW(parse_solidity("constructor(uint a) { x = a; }"));
    CHECK_NOTHROW(parse_solidity(
        "function t(address to, uint v) external returns (bool ok) { if (v > 0) { b[to] += v; } else revert(); "
        "for (uint i = 0; i < 3; i++) { emit T(to, i); } return true; }"));
    CHECK_THROWS_AS(parse_solidity("function ( {"), ParseError);
    const auto root = parse_solidity("function f() public {}");
    CHECK(root.kind == "SourceUnit");
}

TEST_CASE("SBT is deterministic and ignores layout and comments") {
    const std::string code = "function add(uint a, uint b) public pure returns (uint) { return a + b; }";
    const std::string spaced =
        "function  add ( uint a,\n\tuint b )  public pure\n returns(uint)\n{\n  // sum\n  return a+b;\n}\n";
    const auto s = to_sbt(code);
    CHECK_FALSE(s.degraded);
    CHECK(s == to_sbt(code));
    CHECK(s == to_sbt(spaced));
}

TEST_CASE("renaming a function changes only the identifier position") {
    const auto f = to_sbt("function f() public {}");
    const auto g = to_sbt("function g() public {}");
    REQUIRE(f.tokens.size() == g.tokens.size());
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < f.tokens.size(); ++i)
        if (f.tokens[i] != g.tokens[i]) diff.push_back(i);
    REQUIRE(diff.size() == 1);
    CHECK(f.tokens[diff[0]] == "f");
    CHECK(g.tokens[diff[0]] == "g");
    for (const auto& t : f.tokens) {
        CHECK(t != "(");
        CHECK(t != "{");
    }
}

TEST_CASE("linearize is a pre-order walk skipping the root") {
    const auto tree = AstNode::node(
        "SourceUnit", {AstNode::node("A", {AstNode::leaf("x"), AstNode::node("B", {AstNode::leaf("y")})}),
                       AstNode::leaf("z")});
    CHECK(linearize(tree) == Seq{"A", "x", "B", "y", "z"});
}

TEST_CASE("unparseable code falls back to a token-class stream") {
    const auto s = to_sbt("contract C is D { uint x; @@ }}");
    CHECK(s.degraded);
    CHECK_FALSE(s.tokens.empty());
    CHECK(s == degraded_sbt("contract C is D { uint x; @@ }}"));
    const auto d = degraded_sbt("foo(1);");
    CHECK(d.tokens == Seq{"Identifier", "Open", "Literal", "Close", "Separator"});
}

TEST_CASE("synthetic corpus parses without degradation") {
    const auto corpus = corpus::load(testing::data_dir() / "synthetic_corpus.jsonl");
    REQUIRE(corpus.size() == 60);
    for (const auto& p : corpus) {
        CAPTURE(p.id);
        CHECK_FALSE(to_sbt(p.code).degraded);
        CHECK(syntactic_similarity(p.code, p.code) == 1.0);
    }
}

TEST_CASE("levenshtein examples") {
    CHECK(levenshtein(Seq{"a", "b"}, Seq{"a", "b"}) == 0);
    CHECK(levenshtein(Seq{}, Seq{"a", "b", "c"}) == 3);
    CHECK(levenshtein(Seq{"a", "b", "c"}, Seq{"a", "b", "d"}) == 1);
    CHECK(levenshtein(Seq{"k", "i", "t"}, Seq{"s", "i", "t", "s"}) == 2);
}

TEST_CASE("levenshtein matches exhaustive recursion on all short sequences") {
    const auto all = oracle::all_sequences({"a", "b", "c"}, 4);
    REQUIRE(all.size() == 121);
    std::size_t mismatches = 0;
    for (const auto& a : all)
        for (const auto& b : all)
            if (levenshtein(a, b) != oracle::lev_recursive(a, b)) ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("levenshtein properties on random sequences") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; ++t) {
        const auto a = random_seq(rng, 12, 4), b = random_seq(rng, 12, 4), c = random_seq(rng, 12, 4);
        const auto ab = levenshtein(a, b);
        CHECK(ab == oracle::lev_matrix(a, b));
        CHECK(ab == levenshtein(b, a));
        CHECK((ab == 0) == (a == b));
        CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
        const auto lo = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
        CHECK(lo <= ab);
        CHECK(ab <= std::max(a.size(), b.size()));
    }
}

TEST_CASE("syntactic similarity values") {
    CHECK(syntactic_similarity(seq({"a", "b", "c", "d", "e"}), seq({"a", "b", "c", "d", "e"})) == 1.0);
    CHECK(syntactic_similarity(seq({"a", "b", "c"}), seq({"a", "b", "d"})) == doctest::Approx(5.0 / 6.0));
    CHECK(syntactic_similarity(seq({"a", "b"}), seq({"c", "d", "e", "f"})) == doctest::Approx(1.0 / 3.0));
    CHECK(syntactic_similarity(seq({}), seq({})) == 1.0);
    CHECK(syntactic_similarity(seq({"a"}), seq({})) == 0.0);
}

TEST_CASE("lexical sets and Jaccard") {
    CHECK(lexical_set("a a b").tokens == Seq{"a", "b"});
    CHECK(lexical_set("").tokens.empty());
    CHECK(lexical_set("transferFrom transfer").tokens == Seq{"from", "transfer"});
    CHECK(jaccard(LexSet{{"a", "b"}}, LexSet{{"a", "b"}}) == 1.0);
    CHECK(jaccard(LexSet{{"a", "b"}}, LexSet{{"b", "c"}}) == doctest::Approx(1.0 / 3.0));
    CHECK(jaccard(LexSet{{"a"}}, LexSet{{"b"}}) == 0.0);
    CHECK(jaccard(LexSet{}, LexSet{}) == 1.0);
    const auto raw = lexical_set("transferFrom(a)", LexMode::raw_tokens).tokens;
    CHECK(std::find(raw.begin(), raw.end(), "transferFrom") != raw.end());
}

TEST_CASE("mixed score") {
    CHECK(mixed_score(0.5, 0.9, 0.7) == doctest::Approx(0.62));
    CHECK_THROWS_AS(mixed_score(0.5, 0.9, 1.5), UsageError);
    CHECK_THROWS_AS(mixed_score(0.5, 0.9, -0.1), UsageError);
    const std::string a = "function a(uint x) public { y = x; }", b = "function b() external { emit E(); }";
    CHECK(mixed_score(a, a) == 1.0);
    CHECK(mixed_score(a, b, 0.0) == syntactic_similarity(a, b));
    CHECK(mixed_score(a, b, 1.0) == lexical_similarity(a, b));
    for (double l = 0; l <= 1.0; l += 0.1) {
        CHECK(mixed_score(0.3, 0.4, l) <= mixed_score(0.35, 0.4, l) + 1e-15);
        CHECK(mixed_score(0.3, 0.4, l) <= mixed_score(0.3, 0.45, l) + 1e-15);
    }
}

TEST_CASE("similarities are symmetric on the synthetic corpus") {
    const auto corpus = corpus::load(testing::data_dir() / "synthetic_corpus.jsonl");
    std::vector<std::string> codes;
    for (const auto& p : corpus) codes.push_back(p.code);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            CHECK(syntactic_similarity(codes[i], codes[j]) == syntactic_similarity(codes[j], codes[i]));
            CHECK(lexical_similarity(codes[i], codes[j]) == lexical_similarity(codes[j], codes[i]));
            const auto c = compare(make_view(codes[i]), make_view(codes[j]), 0.7);
            CHECK(c.mixed == doctest::Approx(mixed_score(codes[i], codes[j])));
        }
    }
}

}  // TEST_SUITE
