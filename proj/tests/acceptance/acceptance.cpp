// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "../support/oracles.hpp"
#include "scc/codeform/similarity.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/common/rng.hpp"
#include "scc/eval/metrics.hpp"
#include "scc/eval/sampling.hpp"
#include "scc/eval/wilcoxon.hpp"
#include "scc/llm/mock.hpp"
#include "scc/pipeline/config.hpp"
#include "scc/pipeline/stages.hpp"
#include "scc/promptgen/prompt.hpp"
#include "scc/retrieval/retrieval.hpp"
#include "scc/semantic/whitening.hpp"

using namespace scc;

namespace {

// Pinned tolerances and time limits.
constexpr double kMeanTol = 1e-6;
constexpr double kCovTol = 1e-4;
constexpr double kSimilarityTol = 1e-12;
constexpr double kMetricTol = 1e-4;
constexpr double kWilcoxonTol = 1e-6;
constexpr double kWhiteningSeconds = 1.0;
constexpr double kLevenshteinSeconds = 10.0;
constexpr double kRetrievalSeconds = 30.0;
constexpr double kMetricSeconds = 10.0;
constexpr double kEndToEndSeconds = 60.0;

const std::filesystem::path kFixtures = SCC_FIXTURE_DIR;
const std::filesystem::path kData = SCC_DATA_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome sample_size_criterion() {
    const auto n = eval::sample_size(2972, 0.05, 1.96);
    return {n == 340, "sample_size(2972, 0.05, 1.96) = " + std::to_string(n)};
}

Outcome whitening_criterion() {
    Rng rng(20240501);
    const std::size_t rows = 500, dim = 32;
    std::vector<std::string> ids;
    std::vector<float> data;
    std::vector<double> mix(dim * dim);
    for (auto& m : mix) m = rng.uniform() * 2 - 1;
    for (std::size_t i = 0; i < rows; ++i) {
        ids.push_back("v" + std::to_string(i));
        std::vector<double> z(dim);
        for (auto& v : z) v = rng.uniform() * 2 - 1;
        for (std::size_t j = 0; j < dim; ++j) {
            double s = 5.0 * static_cast<double>(j % 3);
            for (std::size_t t = 0; t < dim; ++t) s += mix[j * dim + t] * z[t];
            data.push_back(static_cast<float>(s));
        }
    }
    const semantic::EmbeddingMatrix m(ids, dim, data);
    const std::size_t d = semantic::usable_rank(m);
    const auto model = semantic::fit_whitening(m, d);
    const auto w = model.apply_all(m);

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += w[i * d + j] / static_cast<double>(rows);
    double max_mean = 0;
    for (double v : mean) max_mean = std::max(max_mean, std::fabs(v));
    double cov_norm = 0;
    for (std::size_t a = 0; a < d; ++a) {
        double row = 0;
        for (std::size_t b = 0; b < d; ++b) {
            double c = 0;
            for (std::size_t i = 0; i < rows; ++i) c += (w[i * d + a] - mean[a]) * (w[i * d + b] - mean[b]);
            c /= static_cast<double>(rows);
            row += std::fabs(c - (a == b ? 1.0 : 0.0));
        }
        cov_norm = std::max(cov_norm, row);
    }
    return {max_mean <= kMeanTol && cov_norm <= kCovTol,
            "d=" + std::to_string(d) + " max|mean|=" + fmt("%.3g", max_mean) + " ||cov-I||inf=" + fmt("%.3g", cov_norm)};
}

Outcome levenshtein_criterion() {
    const auto all = oracle::all_sequences({"a", "b", "c"}, 4);
    std::size_t pairs = 0, bad = 0;
    for (const auto& a : all) {
        for (const auto& b : all) {
            ++pairs;
            if (codeform::levenshtein(a, b) != oracle::lev_recursive(a, b)) ++bad;
        }
    }
    std::mt19937_64 rng(77);
    for (int t = 0; t < 1000; ++t) {
        std::vector<std::string> a(rng() % 13), b(rng() % 13);
        for (auto& s : a) s = std::string(1, static_cast<char>('a' + rng() % 5));
        for (auto& s : b) s = std::string(1, static_cast<char>('a' + rng() % 5));
        ++pairs;
        if (codeform::levenshtein(a, b) != oracle::lev_matrix(a, b)) ++bad;
    }
    return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " mismatches"};
}

Outcome retrieval_criterion() {
    std::size_t queries = 0, bad = 0;
    for (std::uint64_t c = 0; c < 20; ++c) {
        const std::size_t size = 20 + static_cast<std::size_t>(c * 13 % 31);  // 20..50
        const auto train = oracle::random_corpus(1000 + c, size);
        const auto emb = oracle::embed(train, 32);
        const auto model = semantic::fit_whitening(emb, std::min<std::size_t>(16, semantic::usable_rank(emb)));
        const retrieval::RetrievalIndex index(train, emb, model);
        retrieval::RetrievalConfig cfg;
        cfg.n = 10;
        cfg.k = 5;
        cfg.lambda = 0.7;
        for (const auto& q : train) {
            ++queries;
            const auto got = index.retrieve({q.id, q.code, emb.row(*emb.find(q.id))}, cfg);
            const auto want = oracle::retrieve_brute_force(train, emb, model, q.id, q.code, 10, 5, 0.7);
            bool same = got.entries.size() == want.size();
            for (std::size_t i = 0; same && i < want.size(); ++i) same = got.entries[i].id == want[i].id;
            if (!same) ++bad;
        }
    }
    return {bad == 0, std::to_string(queries) + " queries over 20 corpora, " + std::to_string(bad) + " mismatches"};
}

Outcome similarity_criterion() {
    using codeform::SbtSequence;
    const std::string code = "function balanceOf(address who) public view returns (uint256) { return balances[who]; }";
    const double lex_self = codeform::lexical_similarity(code, code);
    const double syn_self = codeform::syntactic_similarity(code, code);
    const double mix_self = codeform::mixed_score(code, code);
    const double v56 = codeform::syntactic_similarity(SbtSequence{{"a", "b", "c"}}, SbtSequence{{"a", "b", "d"}});
    const double v13 = codeform::syntactic_similarity(SbtSequence{{"a", "b"}}, SbtSequence{{"c", "d", "e", "f"}});
    const double j13 = codeform::jaccard({{"a", "b"}}, {{"b", "c"}});
    const double m62 = codeform::mixed_score(0.5, 0.9, 0.7);
    const bool ok = lex_self == 1.0 && syn_self == 1.0 && mix_self == 1.0 &&
                    std::fabs(v56 - 5.0 / 6.0) <= kSimilarityTol && std::fabs(v13 - 1.0 / 3.0) <= kSimilarityTol &&
                    std::fabs(j13 - 1.0 / 3.0) <= kSimilarityTol && std::fabs(m62 - 0.62) <= kSimilarityTol;
    return {ok, "self=(" + fmt("%.17g", lex_self) + "," + fmt("%.17g", syn_self) + "," + fmt("%.17g", mix_self) +
                    ") syntactic=" + fmt("%.15f", v56) + "," + fmt("%.15f", v13) + " jaccard=" + fmt("%.15f", j13) +
                    " mixed=" + fmt("%.15f", m62)};
}

Outcome metric_criterion() {
    const auto fx = nlohmann::json::parse(read_file(kFixtures / "metrics.json"));
    std::vector<std::string> cands, refs;
    double worst = 0;
    for (const auto& p : fx.at("pairs")) {
        const std::string c = p.at("candidate"), r = p.at("reference");
        worst = std::max(worst, std::fabs(eval::rouge_n(c, r, 1) - p.at("rouge1").get<double>()));
        worst = std::max(worst, std::fabs(eval::rouge_n(c, r, 2) - p.at("rouge2").get<double>()));
        worst = std::max(worst, std::fabs(eval::rouge_l(c, r) - p.at("rougeL").get<double>()));
        worst = std::max(worst, std::fabs(eval::sentence_bleu4(c, r) - p.at("sentence_bleu4").get<double>()));
        cands.push_back(c);
        refs.push_back(r);
    }
    worst = std::max(worst, std::fabs(eval::bleu4(cands, refs) - fx.at("corpus_bleu4").get<double>()));
    const std::vector<std::string> cm{"the cat sat on the mat"}, rm{"the cat is on the mat"};
    worst = std::max(worst, std::fabs(eval::bleu4(cm, rm) - fx.at("cat_mat_bleu4").get<double>()));

    bool identity = eval::bleu4(refs, refs) == 100.0;
    for (const auto& r : refs) {
        identity = identity && eval::rouge_n(r, r, 1) == 100.0 && eval::rouge_n(r, r, 2) == 100.0 &&
                   eval::rouge_l(r, r) == 100.0;
    }
    std::mt19937_64 rng(4242);
    const char* vocab[] = {"the", "owner", "token", "returns", "balance", "of", "a", "to", "sets", "fee"};
    std::size_t order_violations = 0;
    std::string first_violation;
    for (int i = 0; i < 1000; ++i) {
        std::string c, r;
        for (std::size_t w = rng() % 12; w-- > 0;) c += std::string(vocab[rng() % 10]) + " ";
        for (std::size_t w = 1 + rng() % 12; w-- > 0;) r += std::string(vocab[rng() % 10]) + " ";
        const double r1 = eval::rouge_n(c, r, 1), r2 = eval::rouge_n(c, r, 2);
        if (!(r1 >= r2 && r2 >= 0.0) && order_violations++ == 0) {
            first_violation = " (first: \"" + c + "\" vs \"" + r + "\": rouge1 " + fmt("%.4f", r1) + " < rouge2 " +
                              fmt("%.4f", r2) + ")";
        }
    }
    return {worst <= kMetricTol && identity && order_violations == 0,
            std::to_string(fx.at("pairs").size()) + " fixture pairs, max abs diff " + fmt("%.3g", worst) +
                ", identity " + (identity ? "100" : "not 100") + ", order violations " +
                std::to_string(order_violations) + "/1000" + first_violation};
}

Outcome wilcoxon_criterion() {
    std::mt19937_64 rng(8);
    double worst = 0;
    int cases = 0;
    while (cases < 100) {
        std::vector<double> a(8), b(8);
        for (int i = 0; i < 8; ++i) {
            a[i] = static_cast<double>(rng() % 9) * 0.25;
            b[i] = static_cast<double>(rng() % 9) * 0.25;
        }
        std::size_t nz = 0;
        for (int i = 0; i < 8; ++i) nz += a[i] != b[i];
        if (nz < eval::kWilcoxonMinPairs) continue;
        ++cases;
        worst = std::max(worst, std::fabs(eval::wilcoxon_signed_rank(a, b).p_value -
                                          std::min(1.0, oracle::wilcoxon_enumerated(a, b))));
    }
    return {worst <= kWilcoxonTol, std::to_string(cases) + " length-8 cases, max |dp| " + fmt("%.3g", worst)};
}

Outcome golden_criterion() {
    const auto dir = kFixtures / "golden";
    const auto in = nlohmann::json::parse(read_file(dir / "prompt_inputs.json"));
    std::vector<retrieval::Demonstration> demos;
    for (const auto& d : in.at("demos")) demos.push_back({d.at("id"), d.at("code"), d.at("comment"), 0.0, 0.0});
    const std::string query = in.at("query");
    const auto tmpl = promptgen::PromptTemplate::standard();
    std::string detail;
    bool ok = true;
    for (auto [mode, file] : {std::pair{promptgen::ShotMode::zero, "zero_shot.txt"},
                              std::pair{promptgen::ShotMode::one, "one_shot.txt"},
                              std::pair{promptgen::ShotMode::few, "few_shot.txt"}}) {
        promptgen::PromptOptions o;
        o.mode = mode;
        const bool same = promptgen::build_prompt(tmpl, query, demos, o).text == read_file(dir / file);
        ok = ok && same;
        detail += std::string(file) + (same ? " identical " : " DIFFERS ");
    }
    return {ok, detail};
}

struct Synthetic {
    corpus::Corpus corpus = corpus::load(kData / "synthetic_corpus.jsonl");
    pipeline::PipelineSpec spec;
    Synthetic() {
        const auto cfg = pipeline::load_config(kData / "synthetic.ini");
        spec.D = cfg.D;
        spec.d = cfg.d;
        spec.retrieval.n = cfg.top_n;
        spec.retrieval.k = cfg.k;
        spec.retrieval.lambda = cfg.lambda;
        spec.retrieval.seed = cfg.seed;
        spec.split_seed = cfg.seed;
    }
};

Outcome end_to_end_criterion() {
    const Synthetic s;
    auto mock = llm::MockBackend::echo_top1();
    const auto a = pipeline::run_pipeline(s.corpus, s.spec, mock);
    const auto b = pipeline::run_pipeline(s.corpus, s.spec, mock);
    const bool identical = pipeline::to_json(a.evaluation).dump() == pipeline::to_json(b.evaluation).dump() &&
                           a.evaluation.report == b.evaluation.report;
    const double ours = a.evaluation.report.bleu4;
    const double reuse = a.evaluation.baselines.at(0).report.bleu4;
    return {identical && ours == reuse, std::to_string(a.generated.size()) + " test queries, reports " +
                                            (identical ? "identical" : "DIFFER") + ", BLEU " + fmt("%.6f", ours) +
                                            " vs reuse-top1 " + fmt("%.6f", reuse)};
}

Outcome ablation_criterion() {
    const Synthetic s;
    auto mock = llm::MockBackend::echo_top1();
    const auto run = pipeline::run_pipeline(s.corpus, s.spec, mock);
    const auto ctx = pipeline::make_context(run.split, corpus::Split::test, run.embeddings, run.model);
    auto multiset = [&](retrieval::Strategy strategy) {
        auto cfg = s.spec.retrieval;
        cfg.strategy = strategy;
        std::vector<std::string> ids;
        for (const auto& set : pipeline::retrieve_all(ctx, cfg))
            for (const auto& e : set.entries) ids.push_back(set.query_id + "/" + e.id);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    const bool differs = multiset(retrieval::Strategy::random) != multiset(retrieval::Strategy::full);
    const auto rows = pipeline::shot_sweep(ctx, s.spec.retrieval, {0, 1, 3, 5}, promptgen::PromptTemplate::standard(),
                                           s.spec.prompt, mock, s.spec.generation);
    const auto table = pipeline::to_json(rows);
    bool shaped = rows.size() == 4;
    for (const auto& row : table) {
        for (auto m : eval::kAllMetrics) shaped = shaped && row.contains(std::string(eval::to_string(m))) && row.at(std::string(eval::to_string(m))).is_number();
    }
    return {differs && shaped, std::string("random vs full demos ") + (differs ? "differ" : "IDENTICAL") +
                                   ", shot sweep rows " + std::to_string(rows.size()) +
                                   (shaped ? " with all four metrics" : " MALFORMED")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double seconds;  // 0 means no time limit
    };
    const Criterion criteria[] = {
        {"sample-size-formula", sample_size_criterion, 0},
        {"whitening-moments", whitening_criterion, kWhiteningSeconds},
        {"levenshtein-oracle", levenshtein_criterion, kLevenshteinSeconds},
        {"retrieval-oracle", retrieval_criterion, kRetrievalSeconds},
        {"similarity-values", similarity_criterion, 0},
        {"metric-fixtures", metric_criterion, kMetricSeconds},
        {"wilcoxon-exact", wilcoxon_criterion, 0},
        {"prompt-goldens", golden_criterion, 0},
        {"end-to-end-determinism", end_to_end_criterion, kEndToEndSeconds},
        {"ablation-harness", ablation_criterion, 0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = fail(std::string("threw: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.seconds > 0 && secs > c.seconds) {
            out.pass = false;
            out.detail += " (exceeded " + fmt("%.0f", c.seconds) + "s limit)";
        }
        if (!out.pass) ++failures;
        std::printf("%s %s: %s [%.2fs]\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
