#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/corpus/corpus.hpp"
#include "scc/eval/human_study.hpp"
#include "scc/eval/sampling.hpp"
#include "scc/llm/mock.hpp"
#include "scc/llm/remote.hpp"
#include "scc/llm/replay.hpp"
#include "scc/pipeline/config.hpp"
#include "scc/pipeline/embed_client.hpp"
#include "scc/pipeline/manifest.hpp"
#include "scc/pipeline/stages.hpp"
#include "scc/retrieval/export.hpp"
#include "scc/semantic/hashing_embedder.hpp"

namespace fs = std::filesystem;
using namespace scc;

namespace {

// ---------------------------------------------------------------------------
// shared helpers

template <class T>
T pick(const std::optional<T>& flag, const T& fallback) {
    return flag ? *flag : fallback;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

corpus::Split parse_split_flag(const std::string& text) {
    const auto s = corpus::parse_split(text);
    if (!s) throw UsageError("unknown split '" + text + "'");
    return *s;
}

std::map<std::string, std::string> read_generated(const fs::path& path) {
    std::map<std::string, std::string> out;
    for_each_jsonl(path, [&](std::size_t line, const json& j) {
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("comment") ||
            !j["comment"].is_string()) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": expected {\"id\", \"comment\"}");
        }
        if (!out.emplace(j["id"].get<std::string>(), j["comment"].get<std::string>()).second) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": duplicate id");
        }
    });
    return out;
}

void write_generated(const std::vector<pipeline::GeneratedComment>& generated, const fs::path& path) {
    std::string text;
    for (const auto& g : generated) text += json{{"id", g.id}, {"comment", g.comment}}.dump() + "\n";
    write_file_atomic(path, text);
}

void write_json(const json& j, const fs::path& path) { write_file_atomic(path, j.dump(2) + "\n"); }

std::string cache_dir_default() {
    const char* env = std::getenv("SCC_CACHE_DIR");
    return env != nullptr && *env != '\0' ? env : ".scc-cache";
}

// ---------------------------------------------------------------------------
// option groups

struct RetrievalFlags {
    std::optional<std::size_t> n, k;
    std::optional<double> lambda;
    std::optional<std::uint64_t> seed;
    std::string strategy = "full";

    void add(CLI::App* app, bool with_strategy = true) {
        app->add_option("--n", n, "Stage-1 candidate count");
        app->add_option("--k", k, "Demonstration count");
        app->add_option("--lambda", lambda, "Lexical weight of the mixed score");
        app->add_option("--seed", seed, "Seed for the random strategy");
        if (with_strategy) {
            app->add_option("--strategy", strategy, "full | random | no-whitening | semantic-only");
        }
    }

    retrieval::RetrievalConfig resolve(const pipeline::ToolConfig& cfg) const {
        retrieval::RetrievalConfig c;
        c.n = pick(n, cfg.top_n);
        c.k = pick(k, cfg.k);
        c.lambda = pick(lambda, cfg.lambda);
        c.seed = pick(seed, cfg.seed);
        const auto s = retrieval::parse_strategy(strategy);
        if (!s) throw UsageError("unknown strategy '" + strategy + "'");
        c.strategy = *s;
        c.validate();
        return c;
    }
};

struct PromptFlags {
    std::string mode = "few";
    std::optional<std::size_t> budget;
    std::string template_path;
    std::string order = "most-similar-last";
    std::string cap_style = "words";

    void add(CLI::App* app, bool with_mode = true) {
        if (with_mode) app->add_option("--mode", mode, "zero | one | few");
        app->add_option("--budget", budget, "Maximum estimated prompt tokens");
        app->add_option("--template", template_path, "Template file with {DEMOS}, {QUERY}, {CAP}");
        app->add_option("--order", order, "most-similar-last | most-similar-first");
        app->add_option("--cap-style", cap_style, "words | literal");
    }

    promptgen::PromptOptions resolve(const pipeline::ToolConfig& cfg) const {
        promptgen::PromptOptions o;
        const auto m = promptgen::parse_shot_mode(mode);
        if (!m) throw UsageError("unknown prompt mode '" + mode + "'");
        o.mode = *m;
        o.budget = budget ? budget : cfg.budget;
        if (order == "most-similar-last") {
            o.order = promptgen::DemoOrder::most_similar_last;
        } else if (order == "most-similar-first") {
            o.order = promptgen::DemoOrder::most_similar_first;
        } else {
            throw UsageError("unknown demo order '" + order + "'");
        }
        if (cap_style == "words") {
            o.cap_style = promptgen::CapStyle::word_count;
        } else if (cap_style == "literal") {
            o.cap_style = promptgen::CapStyle::literal;
        } else {
            throw UsageError("unknown cap style '" + cap_style + "'");
        }
        return o;
    }

    promptgen::PromptTemplate load_template() const {
        return template_path.empty() ? promptgen::PromptTemplate::standard()
                                     : promptgen::PromptTemplate::load(template_path);
    }
};

struct BackendFlags {
    std::string backend = "mock";
    std::string mock = "echo-top1";
    std::string fixed_text = "ok";
    std::string references;
    std::string cache_dir = cache_dir_default();
    std::optional<std::string> base_url, model;
    std::optional<double> temperature, timeout;
    std::optional<std::size_t> max_tokens, concurrency;

    void add(CLI::App* app) {
        app->add_option("--backend", backend, "remote | mock | replay");
        app->add_option("--mock", mock, "echo-top1 | fixed | truncate-ground-truth");
        app->add_option("--fixed-text", fixed_text, "Reply of the fixed mock");
        app->add_option("--references", references, "Corpus with reference comments for truncate-ground-truth");
        app->add_option("--cache-dir", cache_dir, "Response cache directory (default $SCC_CACHE_DIR or .scc-cache)");
        app->add_option("--base-url", base_url, "Chat-completion endpoint base URL");
        app->add_option("--llm-model", model, "Model id");
        app->add_option("--temperature", temperature, "Sampling temperature");
        app->add_option("--max-tokens", max_tokens, "Maximum output tokens");
        app->add_option("--concurrency", concurrency, "Maximum in-flight requests");
        app->add_option("--timeout", timeout, "Per-call timeout in seconds");
    }

    pipeline::GenerationSettings settings(const pipeline::ToolConfig& cfg) const {
        pipeline::GenerationSettings s;
        s.model = pick(model, cfg.model);
        s.temperature = pick(temperature, cfg.temperature);
        s.max_tokens = pick(max_tokens, cfg.max_tokens);
        s.concurrency = pick(concurrency, cfg.max_in_flight);
        if (s.concurrency == 0) throw UsageError("--concurrency must be positive");
        return s;
    }

    std::unique_ptr<llm::LlmBackend> make(const pipeline::ToolConfig& cfg, promptgen::DemoOrder order) const {
        if (backend == "mock") {
            if (mock == "echo-top1") return std::make_unique<llm::MockBackend>(llm::MockBackend::echo_top1(order));
            if (mock == "fixed") return std::make_unique<llm::MockBackend>(llm::MockBackend::fixed(fixed_text));
            if (mock == "truncate-ground-truth") {
                if (references.empty()) throw UsageError("truncate-ground-truth needs --references");
                std::map<std::string, std::string> refs;
                for (const auto& p : corpus::load(references)) refs[p.id] = p.comment;
                return std::make_unique<llm::MockBackend>(llm::MockBackend::truncate_ground_truth(std::move(refs)));
            }
            throw UsageError("unknown mock behaviour '" + mock + "'");
        }
        auto cache = std::make_shared<llm::ResponseCache>(cache_dir);
        if (backend == "replay") return std::make_unique<llm::ReplayBackend>(cache);
        if (backend == "remote") {
            llm::RemoteOptions opts;
            opts.max_in_flight = pick(concurrency, cfg.max_in_flight);
            auto transport = llm::make_http_transport(pick(base_url, cfg.base_url), pick(timeout, cfg.timeout_seconds));
            return std::make_unique<llm::RemoteBackend>(transport, llm::api_key_from_env(), cache, opts);
        }
        throw UsageError("unknown backend '" + backend + "'");
    }
};

struct RetrievalInputs {
    std::string corpus_path, embeddings_path, model_path;
    std::string queries = "test";
    std::string lex_mode = "subtokens";

    void add(CLI::App* app) {
        app->add_option("--corpus", corpus_path, "Split-tagged corpus")->required()->check(CLI::ExistingFile);
        app->add_option("--embeddings", embeddings_path, "SCEB embeddings covering train and query ids")
            ->required()
            ->check(CLI::ExistingFile);
        app->add_option("--model", model_path, "SCWH whitening model")->required()->check(CLI::ExistingFile);
        app->add_option("--queries", queries, "Split whose pairs are queries");
        app->add_option("--lex-mode", lex_mode, "subtokens | raw");
    }

    codeform::LexMode lex() const {
        if (lex_mode == "subtokens") return codeform::LexMode::subtokens;
        if (lex_mode == "raw") return codeform::LexMode::raw_tokens;
        throw UsageError("unknown lex mode '" + lex_mode + "'");
    }
};

struct Loaded {
    corpus::Corpus corpus;
    semantic::EmbeddingMatrix embeddings;
    semantic::WhiteningModel model;
};

std::unique_ptr<Loaded> load_inputs(const RetrievalInputs& in) {
    auto out = std::make_unique<Loaded>();
    out->corpus = corpus::load(in.corpus_path);
    out->embeddings = semantic::load_embeddings(in.embeddings_path);
    out->model = semantic::load_whitening(in.model_path);
    return out;
}

void warn_short(const std::vector<retrieval::DemonstrationSet>& sets, std::size_t k) {
    for (const auto& s : sets) {
        if (s.short_result) {
            std::cerr << "warning: query '" << s.query_id << "': only " << s.entries.size() << " of " << k
                      << " demonstrations available\n";
        }
    }
}

std::vector<std::size_t> parse_shots(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoul(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("invalid shot count '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("--shots needs at least one value");
    return out;
}

std::pair<std::string, std::string> parse_named_path(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw UsageError("expected NAME=FILE, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retrieval-augmented comment generation for smart-contract code"};
    app.set_version_flag("--version", pipeline::kToolVersion);
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "INI file with tool defaults")->check(CLI::ExistingFile);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a raw JSONL corpus");
    std::string ingest_in, ingest_out, ingest_issues;
    bool ingest_strict = false;
    ingest->add_option("--input", ingest_in, "Raw corpus")->required()->check(CLI::ExistingFile);
    ingest->add_option("--output", ingest_out, "Validated corpus")->required();
    ingest->add_option("--issues", ingest_issues, "Write malformed-line report here");
    ingest->add_flag("--strict", ingest_strict, "Fail when any line is malformed");

    // clean
    auto* clean = app.add_subcommand("clean", "Remove duplicated, template and short comments");
    std::string clean_in, clean_out, clean_report, clean_target = "comment";
    std::optional<int> dup_threshold, template_threshold, min_words;
    clean->add_option("--input", clean_in, "Corpus")->required()->check(CLI::ExistingFile);
    clean->add_option("--output", clean_out, "Cleaned corpus")->required();
    clean->add_option("--report", clean_report, "Removal report");
    clean->add_option("--dup-code-threshold", dup_threshold, "Distinct code bodies sharing a comment");
    clean->add_option("--template-threshold", template_threshold, "Corpus-wide comment frequency");
    clean->add_option("--min-words", min_words, "Minimum words (0 disables)");
    clean->add_option("--min-words-target", clean_target, "comment | code");

    // split
    auto* split = app.add_subcommand("split", "Assign train/validation/test splits");
    std::string split_in, split_out, split_ratios = "0.8,0.1,0.1";
    std::optional<std::uint64_t> split_seed;
    split->add_option("--input", split_in, "Corpus")->required()->check(CLI::ExistingFile);
    split->add_option("--output", split_out, "Split-tagged corpus")->required();
    split->add_option("--ratios", split_ratios, "train,validation,test");
    split->add_option("--seed", split_seed, "Shuffle seed");

    // stats
    auto* stats = app.add_subcommand("stats", "Per-split counts and average token lengths");
    std::string stats_in;
    stats->add_option("--input", stats_in, "Split-tagged corpus")->required()->check(CLI::ExistingFile);

    // embed
    auto* embed = app.add_subcommand("embed", "Produce an SCEB embedding file");
    std::string embed_corpus, embed_out, embed_service, embed_import, embed_split = "all",
                                                                      embed_pooling = "first_last_avg";
    bool embed_hashing = false;
    std::optional<std::size_t> embed_dim, embed_max_len;
    std::size_t embed_batch = pipeline::kMaxEmbedBatch;
    double embed_timeout = 120.0;
    embed->add_option("--corpus", embed_corpus, "Corpus whose codes are embedded")->required()->check(CLI::ExistingFile);
    embed->add_option("--output", embed_out, "SCEB file")->required();
    auto* svc_opt = embed->add_option("--service", embed_service, "Embedding service base URL");
    auto* imp_opt = embed->add_option("--import", embed_import, "SCEB or JSONL vectors")->check(CLI::ExistingFile);
    auto* hash_opt = embed->add_flag("--hashing", embed_hashing, "Offline feature-hashing embedder");
    svc_opt->excludes(imp_opt)->excludes(hash_opt);
    imp_opt->excludes(hash_opt);
    embed->add_option("--split", embed_split, "all | train | validation | test");
    embed->add_option("--pooling", embed_pooling, "cls | mean | first_last_avg");
    embed->add_option("--max-length", embed_max_len, "Token truncation bound");
    embed->add_option("--dim", embed_dim, "Expected embedding width");
    embed->add_option("--batch-size", embed_batch, "Texts per request (<= 64)");
    embed->add_option("--timeout", embed_timeout, "Per-request timeout in seconds");

    // whiten
    auto* whiten = app.add_subcommand("whiten", "Fit or apply the whitening transform");
    whiten->require_subcommand(1);
    auto* wfit = whiten->add_subcommand("fit", "Fit on training embeddings");
    std::string wfit_emb, wfit_corpus, wfit_out, wfit_split = "train";
    std::optional<std::size_t> wfit_d;
    wfit->add_option("--embeddings", wfit_emb, "SCEB file")->required()->check(CLI::ExistingFile);
    wfit->add_option("--corpus", wfit_corpus, "Split-tagged corpus selecting the fitting rows")->check(CLI::ExistingFile);
    wfit->add_option("--split", wfit_split, "Split used for fitting when --corpus is given");
    wfit->add_option("--d", wfit_d, "Output dimension");
    wfit->add_option("--output", wfit_out, "SCWH file")->required();
    auto* wapply = whiten->add_subcommand("apply", "Transform embeddings");
    std::string wapply_model, wapply_emb, wapply_out;
    wapply->add_option("--model", wapply_model, "SCWH file")->required()->check(CLI::ExistingFile);
    wapply->add_option("--embeddings", wapply_emb, "SCEB file")->required()->check(CLI::ExistingFile);
    wapply->add_option("--output", wapply_out, "Whitened SCEB file")->required();

    // retrieve
    auto* retrieve = app.add_subcommand("retrieve", "Select demonstrations for each query");
    RetrievalInputs ret_in;
    RetrievalFlags ret_flags;
    std::string ret_out;
    ret_in.add(retrieve);
    ret_flags.add(retrieve);
    retrieve->add_option("--output", ret_out, "Demonstration JSONL")->required();

    // prompt
    auto* prompt = app.add_subcommand("prompt", "Render prompts");
    std::string prompt_corpus, prompt_demos, prompt_out, prompt_queries = "test";
    PromptFlags prompt_flags;
    prompt->add_option("--corpus", prompt_corpus, "Split-tagged corpus")->required()->check(CLI::ExistingFile);
    prompt->add_option("--demos", prompt_demos, "Demonstration JSONL from retrieve")->check(CLI::ExistingFile);
    prompt->add_option("--queries", prompt_queries, "Split whose pairs are queries");
    prompt->add_option("--output", prompt_out, "Prompt JSONL")->required();
    prompt_flags.add(prompt);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate one comment per prompt");
    std::string gen_prompts, gen_out, gen_order = "most-similar-last";
    BackendFlags gen_backend;
    generate->add_option("--prompts", gen_prompts, "Prompt JSONL")->required()->check(CLI::ExistingFile);
    generate->add_option("--output", gen_out, "Generated JSONL")->required();
    generate->add_option("--order", gen_order, "Demo order the prompts were rendered with (echo-top1)");
    gen_backend.add(generate);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score generated comments");
    std::string ev_corpus, ev_generated, ev_out, ev_queries = "test", ev_against = "ground-truth", ev_baselines;
    std::string ev_emb, ev_model;
    std::vector<std::string> ev_baseline_files;
    RetrievalFlags ev_flags;
    evaluate->add_option("--corpus", ev_corpus, "Split-tagged corpus")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--generated", ev_generated, "Generated JSONL")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--queries", ev_queries, "Split whose pairs were generated");
    evaluate->add_option("--against", ev_against, "Reference source (ground-truth)");
    evaluate->add_option("--baselines", ev_baselines, "Comma-separated built-in baselines (reuse-top1)");
    evaluate->add_option("--baseline", ev_baseline_files, "Extra baseline as NAME=FILE (generated JSONL)");
    evaluate->add_option("--embeddings", ev_emb, "SCEB file for reuse-top1")->check(CLI::ExistingFile);
    evaluate->add_option("--model", ev_model, "SCWH file for reuse-top1")->check(CLI::ExistingFile);
    evaluate->add_option("--output", ev_out, "Report JSON");
    ev_flags.add(evaluate, false);

    // ablate
    auto* ablate = app.add_subcommand("ablate", "Shot-count and strategy sweeps");
    RetrievalInputs ab_in;
    RetrievalFlags ab_flags;
    PromptFlags ab_prompt;
    BackendFlags ab_backend;
    std::string ab_shots = "0,1,3,5", ab_strategies, ab_out;
    ab_in.add(ablate);
    ab_flags.add(ablate, false);
    ab_prompt.add(ablate, false);
    ab_backend.add(ablate);
    ablate->add_option("--shots", ab_shots, "Comma-separated shot counts");
    ablate->add_option("--strategies", ab_strategies, "Comma-separated strategies for a strategy sweep");
    ablate->add_option("--output", ab_out, "Report JSON");

    // sample-size
    auto* ssize = app.add_subcommand("sample-size", "Finite-population sample size");
    double ss_size = 0.0, ss_e = 0.05, ss_z = 1.96;
    ssize->add_option("--size", ss_size, "Population size")->required();
    ssize->add_option("--e", ss_e, "Margin of error");
    ssize->add_option("--z", ss_z, "Confidence score");

    // questionnaire
    auto* quest = app.add_subcommand("questionnaire", "Human-study forms and rating aggregation");
    quest->require_subcommand(1);
    auto* qexport = quest->add_subcommand("export", "Write blinded review forms");
    std::string qe_corpus, qe_forms, qe_labels, qe_queries = "test";
    std::vector<std::string> qe_outputs;
    std::optional<std::size_t> qe_count;
    std::optional<std::uint64_t> qe_seed;
    qexport->add_option("--corpus", qe_corpus, "Split-tagged corpus")->required()->check(CLI::ExistingFile);
    qexport->add_option("--queries", qe_queries, "Split to sample from");
    qexport->add_option("--approach", qe_outputs, "Approach outputs as NAME=FILE (generated JSONL)")->required();
    qexport->add_option("--count", qe_count, "Items to sample (default: sample-size of the split)");
    qexport->add_option("--seed", qe_seed, "Sampling seed");
    qexport->add_option("--forms", qe_forms, "Forms JSONL")->required();
    qexport->add_option("--label-map", qe_labels, "Sealed label map JSON")->required();
    auto* qagg = quest->add_subcommand("aggregate", "Average ratings per approach");
    std::string qa_ratings, qa_labels, qa_out;
    qagg->add_option("--ratings", qa_ratings, "Ratings JSONL")->required()->check(CLI::ExistingFile);
    qagg->add_option("--label-map", qa_labels, "Label map for blinded ratings")->check(CLI::ExistingFile);
    qagg->add_option("--output", qa_out, "Summary JSON");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Run every stage and write a manifest");
    std::string pipe_in, pipe_dir, pipe_emb_import;
    RetrievalFlags pipe_flags;
    PromptFlags pipe_prompt;
    BackendFlags pipe_backend;
    std::optional<std::size_t> pipe_d, pipe_dim;
    std::string pipe_rerun;
    auto* pipe_input_opt = pipe->add_option("--input", pipe_in, "Raw corpus")->check(CLI::ExistingFile);
    pipe->add_option("--rerun", pipe_rerun, "Repeat the run recorded in a manifest and verify its outputs")
        ->check(CLI::ExistingFile)
        ->excludes(pipe_input_opt);
    pipe->add_option("--workdir", pipe_dir, "Output directory")->required();
    pipe->add_option("--import-embeddings", pipe_emb_import, "Vectors for every id (default: hashing embedder)")
        ->check(CLI::ExistingFile);
    pipe->add_option("--d", pipe_d, "Whitened dimension");
    pipe->add_option("--dim", pipe_dim, "Hashing embedder width");
    pipe_flags.add(pipe);
    pipe_prompt.add(pipe);
    pipe_backend.add(pipe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: usage: " << one_line(e.what()) << "\n";
        return exit_code_for(ErrorKind::usage);
    }

    try {
        pipeline::ToolConfig cfg;
        if (!config_path.empty()) cfg = pipeline::load_config(config_path);

        if (*ingest) {
            auto result = corpus::ingest_file(ingest_in);
            for (const auto& issue : result.issues) {
                std::cerr << "warning: line " << issue.line << ": " << one_line(issue.message) << "\n";
            }
            if (!ingest_issues.empty()) {
                std::string text;
                for (const auto& issue : result.issues) {
                    text += json{{"line", issue.line}, {"message", issue.message}}.dump() + "\n";
                }
                write_file_atomic(ingest_issues, text);
            }
            if (ingest_strict && !result.issues.empty()) {
                throw DataError(std::to_string(result.issues.size()) + " malformed line(s) in " + ingest_in);
            }
            corpus::save(result.corpus, ingest_out);
            std::cerr << "ingested " << result.corpus.size() << " pairs, " << result.issues.size() << " issue(s)\n";
        } else if (*clean) {
            corpus::CleanOptions opts;
            opts.dup_code_threshold = pick(dup_threshold, cfg.dup_code_threshold);
            opts.template_freq_threshold = pick(template_threshold, cfg.template_freq_threshold);
            opts.min_words = pick(min_words, cfg.min_words);
            if (clean_target == "comment") {
                opts.min_words_target = corpus::WordFilterTarget::comment;
            } else if (clean_target == "code") {
                opts.min_words_target = corpus::WordFilterTarget::code;
            } else {
                throw UsageError("unknown --min-words-target '" + clean_target + "'");
            }
            const auto result = corpus::clean(corpus::load(clean_in), opts);
            corpus::save(result.corpus, clean_out);
            if (!clean_report.empty()) {
                std::ostringstream report;
                corpus::write_removal_report(result.removed, report);
                write_file_atomic(clean_report, report.str());
            }
            std::cerr << "kept " << result.corpus.size() << " pairs, removed " << result.removed.size() << "\n";
        } else if (*split) {
            const auto parts = split_list(split_ratios);
            if (parts.size() != 3) throw UsageError("--ratios needs three comma-separated values");
            corpus::SplitRatios ratios;
            try {
                ratios = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
            } catch (const std::exception&) {
                throw UsageError("invalid --ratios '" + split_ratios + "'");
            }
            const auto result = corpus::split(corpus::load(split_in), ratios, pick(split_seed, cfg.seed));
            corpus::save(result, split_out);
        } else if (*stats) {
            const auto s = corpus::stats(corpus::load(stats_in));
            json out = json::object();
            for (const auto sp : {corpus::Split::train, corpus::Split::validation, corpus::Split::test}) {
                const auto& x = s.of(sp);
                out[std::string(corpus::to_string(sp))] = {{"count", x.count},
                                                           {"avg_code_tokens", x.avg_code_tokens},
                                                           {"avg_comment_tokens", x.avg_comment_tokens}};
            }
            out["total"] = s.total();
            std::cout << out.dump(2) << "\n";
        } else if (*embed) {
            auto c = corpus::load(embed_corpus);
            if (embed_split != "all") c = c.subset(parse_split_flag(embed_split));
            const std::size_t dim = pick(embed_dim, cfg.D);
            semantic::EmbeddingMatrix m;
            if (!embed_service.empty()) {
                auto transport = llm::make_http_transport(embed_service, embed_timeout);
                pipeline::EmbedServiceOptions opts;
                opts.pooling = embed_pooling;
                opts.max_length = pick(embed_max_len, cfg.max_input_length);
                opts.batch_size = embed_batch;
                opts.expected_dim = dim;
                m = pipeline::embed_via_service(*transport, c, opts);
            } else if (!embed_import.empty()) {
                m = pipeline::import_embeddings(embed_import, c);
            } else if (embed_hashing) {
                std::vector<std::string> ids, codes;
                for (const auto& p : c) {
                    ids.push_back(p.id);
                    codes.push_back(p.code);
                }
                m = semantic::HashingEmbedder(dim).embed_all(ids, codes);
            } else {
                throw UsageError("embed needs one of --service, --import or --hashing");
            }
            semantic::save_embeddings(m, embed_out);
            std::cerr << "wrote " << m.rows() << " x " << m.dim() << " embeddings\n";
        } else if (*whiten) {
            if (*wfit) {
                auto m = semantic::load_embeddings(wfit_emb);
                if (!wfit_corpus.empty()) {
                    m = pipeline::select_rows(m, corpus::load(wfit_corpus).subset(parse_split_flag(wfit_split)));
                }
                const auto model = semantic::fit_whitening(m, pick(wfit_d, cfg.d));
                semantic::save_whitening(model, wfit_out);
                std::cerr << "fitted " << model.input_dim << " -> " << model.output_dim << " on " << model.source_count
                          << " rows\n";
            } else {
                const auto model = semantic::load_whitening(wapply_model);
                const auto m = semantic::load_embeddings(wapply_emb);
                const auto values = model.apply_all(m);
                std::vector<float> data(values.begin(), values.end());
                semantic::save_embeddings(
                    semantic::EmbeddingMatrix({m.ids().begin(), m.ids().end()}, model.output_dim, std::move(data)),
                    wapply_out);
            }
        } else if (*retrieve) {
            const auto in = load_inputs(ret_in);
            const auto config = ret_flags.resolve(cfg);
            const auto ctx = pipeline::make_context(in->corpus, parse_split_flag(ret_in.queries), in->embeddings,
                                                    in->model, ret_in.lex());
            const auto sets = pipeline::retrieve_all(ctx, config);
            warn_short(sets, config.k);
            retrieval::write_demonstrations(sets, ret_out);
        } else if (*prompt) {
            const auto c = corpus::load(prompt_corpus);
            const auto options = prompt_flags.resolve(cfg);
            const auto queries = c.subset(parse_split_flag(prompt_queries));
            std::vector<retrieval::DemonstrationSet> demos;
            if (options.mode != promptgen::ShotMode::zero) {
                if (prompt_demos.empty()) throw UsageError("--demos is required for one- and few-shot prompts");
                demos = retrieval::read_demonstrations(prompt_demos, c.subset(corpus::Split::train));
            }
            const auto records = pipeline::render_all(queries, demos, prompt_flags.load_template(), options);
            std::string text;
            for (const auto& r : records) {
                if (!r.prompt.dropped_ids.empty()) {
                    std::cerr << "warning: query '" << r.id << "': dropped " << r.prompt.dropped_ids.size()
                              << " demonstration(s) to fit the budget\n";
                }
                text += pipeline::to_json(r).dump() + "\n";
            }
            write_file_atomic(prompt_out, text);
        } else if (*generate) {
            std::vector<pipeline::PromptRecord> prompts;
            for_each_jsonl(gen_prompts, [&](std::size_t, const json& j) { prompts.push_back(pipeline::prompt_from_json(j)); });
            PromptFlags order_flags;
            order_flags.order = gen_order;
            auto backend = gen_backend.make(cfg, order_flags.resolve(cfg).order);
            const auto generated = pipeline::generate_all(*backend, prompts, gen_backend.settings(cfg));
            write_generated(generated, gen_out);
            std::size_t hits = 0;
            for (const auto& g : generated) hits += g.cache_hit ? 1 : 0;
            std::cerr << "generated " << generated.size() << " comments (" << hits << " from cache)\n";
        } else if (*evaluate) {
            if (ev_against != "ground-truth") throw UsageError("--against supports only ground-truth");
            const auto c = corpus::load(ev_corpus);
            const auto split_kind = parse_split_flag(ev_queries);
            const auto queries = c.subset(split_kind);
            std::map<std::string, std::map<std::string, std::string>> baselines;
            for (const auto& name : split_list(ev_baselines)) {
                if (name != "reuse-top1") throw UsageError("unknown baseline '" + name + "'");
                if (ev_emb.empty() || ev_model.empty()) {
                    throw UsageError("reuse-top1 needs --embeddings and --model");
                }
                const auto emb = semantic::load_embeddings(ev_emb);
                const auto model = semantic::load_whitening(ev_model);
                const auto ctx = pipeline::make_context(c, split_kind, emb, model);
                auto config = ev_flags.resolve(cfg);
                const auto outputs = pipeline::reuse_top1_all(ctx, config);
                auto& dst = baselines[name];
                for (std::size_t i = 0; i < ctx.queries.size(); ++i) dst[ctx.queries[i].id] = outputs[i];
            }
            for (const auto& spec : ev_baseline_files) {
                auto [name, file] = parse_named_path(spec);
                baselines[name] = read_generated(file);
            }
            const auto outcome = pipeline::evaluate_outputs(queries, read_generated(ev_generated), baselines);
            const auto j = pipeline::to_json(outcome);
            if (!ev_out.empty()) write_json(j, ev_out);
            std::vector<pipeline::AblationRow> rows{{"approach", outcome.report}};
            for (const auto& b : outcome.baselines) rows.push_back({b.name, b.report});
            std::cout << pipeline::format_table(rows, "system");
            for (const auto& b : outcome.baselines) {
                for (const auto& [metric, s] : b.wilcoxon) {
                    std::cout << "wilcoxon approach vs " << b.name << " " << metric << ": ";
                    if (s.result) {
                        std::cout << "p=" << s.result->p_value << "\n";
                    } else {
                        std::cout << "n/a (" << s.error << ")\n";
                    }
                }
            }
        } else if (*ablate) {
            const auto in = load_inputs(ab_in);
            auto config = ab_flags.resolve(cfg);
            const auto options = ab_prompt.resolve(cfg);
            const auto ctx = pipeline::make_context(in->corpus, parse_split_flag(ab_in.queries), in->embeddings,
                                                    in->model, ab_in.lex());
            auto backend = ab_backend.make(cfg, options.order);
            const auto settings = ab_backend.settings(cfg);
            const auto tmpl = ab_prompt.load_template();
            json report = json::object();
            const auto shot_rows = pipeline::shot_sweep(ctx, config, parse_shots(ab_shots), tmpl, options, *backend, settings);
            report["shots"] = pipeline::to_json(shot_rows);
            std::cout << pipeline::format_table(shot_rows, "shots");
            if (!ab_strategies.empty()) {
                std::vector<retrieval::Strategy> strategies;
                for (const auto& s : split_list(ab_strategies)) {
                    const auto parsed = retrieval::parse_strategy(s);
                    if (!parsed) throw UsageError("unknown strategy '" + s + "'");
                    strategies.push_back(*parsed);
                }
                const auto rows = pipeline::strategy_sweep(ctx, config, strategies, tmpl, options, *backend, settings);
                report["strategies"] = pipeline::to_json(rows);
                std::cout << "\n" << pipeline::format_table(rows, "strategy");
            }
            if (!ab_out.empty()) write_json(report, ab_out);
        } else if (*ssize) {
            std::cout << eval::sample_size(ss_size, ss_e, ss_z) << "\n";
        } else if (*quest) {
            if (*qexport) {
                const auto c = corpus::load(qe_corpus);
                const auto items = c.subset(parse_split_flag(qe_queries));
                eval::ApproachOutputs outputs;
                for (const auto& spec : qe_outputs) {
                    auto [name, file] = parse_named_path(spec);
                    outputs[name] = read_generated(file);
                }
                const std::size_t count =
                    qe_count ? *qe_count : eval::sample_size(static_cast<double>(std::max<std::size_t>(1, items.size())));
                const auto q = eval::export_questionnaire(items, outputs, count, pick(qe_seed, cfg.seed));
                eval::write_questionnaire(q, qe_forms, qe_labels);
                std::cerr << "wrote " << q.forms.size() << " forms\n";
            } else {
                const fs::path labels = qa_labels;
                const auto records = eval::read_ratings(qa_ratings, qa_labels.empty() ? nullptr : &labels);
                const auto summary = eval::aggregate_ratings(records);
                if (!qa_out.empty()) write_json(eval::to_json(summary), qa_out);
                for (const auto& s : summary) {
                    char line[256];
                    std::snprintf(line, sizeof line, "%-20s n=%-5zu similarity %.2f  naturalness %.2f  informativeness %.2f\n",
                                  s.approach.c_str(), s.count, s.similarity, s.naturalness, s.informativeness);
                    std::cout << line;
                }
            }
        } else if (*pipe) {
            std::optional<pipeline::RunManifest> previous;
            if (!pipe_rerun.empty()) {
                previous = pipeline::load_manifest(pipe_rerun);
                const json& pc = previous->config;
                if (previous->inputs.empty()) throw DataError("manifest lists no inputs");
                for (const auto& in : previous->inputs) {
                    if (pipeline::digest_file(in.path).sha256 != in.sha256) {
                        throw DataError("input " + in.path + " changed since the recorded run");
                    }
                }
                cfg = pipeline::config_from_json(pc);
                pipe_in = previous->inputs.front().path;
                pipe_emb_import = pc.value("import_embeddings", std::string());
                pipe_d = cfg.d;
                pipe_dim = cfg.D;
                pipe_flags.strategy = pc.value("strategy", pipe_flags.strategy);
                pipe_prompt.mode = pc.value("mode", pipe_prompt.mode);
                pipe_prompt.order = pc.value("order", pipe_prompt.order);
                pipe_prompt.cap_style = pc.value("cap_style", pipe_prompt.cap_style);
                pipe_prompt.template_path = pc.value("template", std::string());
                if (pipe->count("--backend") == 0) {
                    const auto recorded = pc.value("backend", std::string("mock"));
                    pipe_backend.backend = recorded == "remote" ? "replay" : recorded;
                }
                pipe_backend.mock = pc.value("mock", pipe_backend.mock);
                pipe_backend.fixed_text = pc.value("fixed_text", pipe_backend.fixed_text);
                pipe_backend.references = pc.value("references", std::string());
            } else if (pipe_in.empty()) {
                throw UsageError("pipeline needs --input or --rerun");
            }

            pipeline::RunManifest manifest;
            manifest.started_at = pipeline::utc_timestamp();
            const fs::path dir = pipe_dir;
            fs::create_directories(dir);

            auto ingested = corpus::ingest_file(pipe_in);
            for (const auto& issue : ingested.issues) {
                std::cerr << "warning: line " << issue.line << ": " << one_line(issue.message) << "\n";
            }
            pipeline::PipelineSpec spec;
            spec.D = pick(pipe_dim, cfg.D);
            spec.d = pick(pipe_d, cfg.d);
            spec.retrieval = pipe_flags.resolve(cfg);
            spec.clean.dup_code_threshold = cfg.dup_code_threshold;
            spec.clean.template_freq_threshold = cfg.template_freq_threshold;
            spec.clean.min_words = cfg.min_words;
            spec.split_seed = spec.retrieval.seed;
            spec.prompt = pipe_prompt.resolve(cfg);
            spec.generation = pipe_backend.settings(cfg);
            semantic::EmbeddingMatrix imported;
            if (!pipe_emb_import.empty()) {
                imported = pipeline::import_embeddings(pipe_emb_import, ingested.corpus);
                spec.embeddings = &imported;
            }
            auto backend = pipe_backend.make(cfg, spec.prompt.order);
            const auto run = pipeline::run_pipeline(ingested.corpus, spec, *backend);

            auto stage = [&](const std::string& name, std::vector<fs::path> files) {
                pipeline::StageRecord rec{name, {}};
                for (const auto& f : files) {
                    auto d = pipeline::digest_file(f);
                    d.path = fs::relative(f, dir).generic_string();
                    rec.outputs.push_back(std::move(d));
                }
                manifest.stages.push_back(std::move(rec));
            };
            corpus::save(ingested.corpus, dir / "corpus.jsonl");
            stage("ingest", {dir / "corpus.jsonl"});
            corpus::save(run.cleaned, dir / "cleaned.jsonl");
            {
                std::ostringstream report;
                corpus::write_removal_report(run.removed, report);
                write_file_atomic(dir / "removed.jsonl", report.str());
            }
            stage("clean", {dir / "cleaned.jsonl", dir / "removed.jsonl"});
            corpus::save(run.split, dir / "split.jsonl");
            stage("split", {dir / "split.jsonl"});
            semantic::save_embeddings(run.embeddings, dir / "embeddings.sceb");
            stage("embed", {dir / "embeddings.sceb"});
            semantic::save_whitening(run.model, dir / "whitening.scwh");
            stage("whiten", {dir / "whitening.scwh"});
            retrieval::write_demonstrations(run.demos, dir / "demos.jsonl");
            stage("retrieve", {dir / "demos.jsonl"});
            {
                std::string text;
                for (const auto& r : run.prompts) text += pipeline::to_json(r).dump() + "\n";
                write_file_atomic(dir / "prompts.jsonl", text);
            }
            stage("prompt", {dir / "prompts.jsonl"});
            write_generated(run.generated, dir / "generated.jsonl");
            stage("generate", {dir / "generated.jsonl"});
            write_json(pipeline::to_json(run.evaluation), dir / "report.json");
            stage("evaluate", {dir / "report.json"});

            auto cfg_json = pipeline::to_json(cfg);
            cfg_json["d"] = spec.d;
            cfg_json["D"] = spec.D;
            cfg_json["top_n"] = spec.retrieval.n;
            cfg_json["k"] = spec.retrieval.k;
            cfg_json["lambda"] = spec.retrieval.lambda;
            cfg_json["strategy"] = std::string(retrieval::to_string(spec.retrieval.strategy));
            cfg_json["mode"] = std::string(promptgen::to_string(spec.prompt.mode));
            cfg_json["backend"] = pipe_backend.backend;
            cfg_json["budget"] = spec.prompt.budget ? json(*spec.prompt.budget) : json(nullptr);
            cfg_json["model"] = spec.generation.model;
            cfg_json["temperature"] = spec.generation.temperature;
            cfg_json["max_tokens"] = spec.generation.max_tokens;
            cfg_json["max_in_flight"] = spec.generation.concurrency;
            cfg_json["base_url"] = pick(pipe_backend.base_url, cfg.base_url);
            cfg_json["timeout_seconds"] = pick(pipe_backend.timeout, cfg.timeout_seconds);
            cfg_json["order"] = pipe_prompt.order;
            cfg_json["cap_style"] = pipe_prompt.cap_style;
            cfg_json["seed"] = spec.retrieval.seed;
            if (!pipe_prompt.template_path.empty()) {
                cfg_json["template"] = fs::absolute(pipe_prompt.template_path).generic_string();
            }
            if (pipe_backend.backend == "mock") {
                cfg_json["mock"] = pipe_backend.mock;
                if (pipe_backend.mock == "fixed") cfg_json["fixed_text"] = pipe_backend.fixed_text;
                if (!pipe_backend.references.empty()) {
                    cfg_json["references"] = fs::absolute(pipe_backend.references).generic_string();
                }
            }
            auto input_digest = [](const std::string& path) {
                auto d = pipeline::digest_file(path);
                d.path = fs::absolute(path).generic_string();
                return d;
            };
            manifest.inputs.push_back(input_digest(pipe_in));
            if (!pipe_emb_import.empty()) {
                manifest.inputs.push_back(input_digest(pipe_emb_import));
                cfg_json["import_embeddings"] = manifest.inputs.back().path;
            }
            manifest.config = cfg_json;
            manifest.seeds = {{"split", spec.split_seed}, {"retrieval", spec.retrieval.seed}};
            manifest.finished_at = pipeline::utc_timestamp();
            pipeline::save_manifest(manifest, dir / "manifest.json");

            if (previous) {
                std::map<std::string, std::string> expected;
                for (const auto& st : previous->stages) {
                    for (const auto& o : st.outputs) expected[st.name + "/" + o.path] = o.sha256;
                }
                std::size_t checked = 0;
                for (const auto& st : manifest.stages) {
                    for (const auto& o : st.outputs) {
                        const auto it = expected.find(st.name + "/" + o.path);
                        if (it == expected.end()) throw DataError("stage " + st.name + ": " + o.path + " not in manifest");
                        if (it->second != o.sha256) {
                            throw DataError("stage " + st.name + ": " + o.path + " differs from the recorded run");
                        }
                        ++checked;
                    }
                }
                if (checked != expected.size()) throw DataError("recorded run has outputs this run did not produce");
                std::cerr << "reproduced " << checked << " recorded outputs\n";
            }

            const auto& r = run.evaluation.report;
            std::cout << pipeline::format_table({{"approach", r}, {"reuse-top1", run.evaluation.baselines.at(0).report}},
                                                "system");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << (e.kind() == ErrorKind::usage ? "usage" : e.kind() == ErrorKind::data ? "data" : "remote")
                  << ": " << one_line(e.what()) << "\n";
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: data: " << one_line(e.what()) << "\n";
        return exit_code_for(ErrorKind::data);
    } catch (const std::exception& e) {
        std::cerr << "error: data: " << one_line(e.what()) << "\n";
        return exit_code_for(ErrorKind::data);
    }
    return 0;
}
