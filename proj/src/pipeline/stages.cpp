#include "scc/pipeline/stages.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include "scc/common/error.hpp"
#include "scc/pipeline/embed_client.hpp"
#include "scc/semantic/hashing_embedder.hpp"

namespace scc::pipeline {

RetrievalContext make_context(const corpus::Corpus& split_corpus, corpus::Split query_split,
                              const semantic::EmbeddingMatrix& embeddings, const semantic::WhiteningModel& model,
                              codeform::LexMode lex_mode) {
    auto train = split_corpus.subset(corpus::Split::train);
    auto queries = split_corpus.subset(query_split);
    retrieval::RetrievalIndex index(train, embeddings, model, lex_mode);
    return RetrievalContext{std::move(train), std::move(queries), &embeddings, std::move(index)};
}

retrieval::Query make_query(const corpus::CodeCommentPair& pair, const semantic::EmbeddingMatrix& embeddings) {
    const auto row = embeddings.find(pair.id);
    if (!row) throw DataError("no embedding for query '" + pair.id + "'");
    return retrieval::Query{pair.id, pair.code, embeddings.row(*row)};
}

std::vector<retrieval::DemonstrationSet> retrieve_all(const RetrievalContext& ctx,
                                                      const retrieval::RetrievalConfig& config) {
    config.validate();
    std::vector<retrieval::DemonstrationSet> out;
    out.reserve(ctx.queries.size());
    for (const auto& q : ctx.queries) out.push_back(ctx.index.retrieve(make_query(q, *ctx.embeddings), config));
    return out;
}

std::vector<std::string> reuse_top1_all(const RetrievalContext& ctx, const retrieval::RetrievalConfig& config) {
    config.validate();
    std::vector<std::string> out;
    out.reserve(ctx.queries.size());
    for (const auto& q : ctx.queries) out.push_back(ctx.index.reuse_top1(make_query(q, *ctx.embeddings), config));
    return out;
}

std::vector<PromptRecord> render_all(const corpus::Corpus& queries,
                                     const std::vector<retrieval::DemonstrationSet>& demos,
                                     const promptgen::PromptTemplate& tmpl, const promptgen::PromptOptions& options) {
    const bool zero = options.mode == promptgen::ShotMode::zero;
    if (!zero && demos.size() != queries.size()) {
        throw DataError("prompt: " + std::to_string(demos.size()) + " demonstration sets for " +
                        std::to_string(queries.size()) + " queries");
    }
    std::vector<PromptRecord> out;
    out.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto& q = queries[i];
        std::span<const retrieval::Demonstration> entries;
        if (!zero) {
            if (demos[i].query_id != q.id) {
                throw DataError("prompt: demonstration set " + std::to_string(i + 1) + " is for '" + demos[i].query_id +
                                "', expected '" + q.id + "'");
            }
            entries = demos[i].entries;
        }
        out.push_back({q.id, promptgen::build_prompt(tmpl, q.code, entries, options)});
    }
    return out;
}

json to_json(const PromptRecord& r) {
    return json{{"id", r.id},
                {"prompt", r.prompt.text},
                {"demo_count", r.prompt.demo_count},
                {"length_cap_words", r.prompt.length_cap_words},
                {"estimated_tokens", r.prompt.estimated_tokens},
                {"dropped", r.prompt.dropped_ids}};
}

PromptRecord prompt_from_json(const json& j) {
    try {
        PromptRecord r;
        r.id = j.at("id").get<std::string>();
        r.prompt.text = j.at("prompt").get<std::string>();
        r.prompt.demo_count = j.value("demo_count", std::size_t{0});
        r.prompt.length_cap_words = j.value("length_cap_words", std::size_t{0});
        r.prompt.estimated_tokens = j.value("estimated_tokens", promptgen::estimate_tokens(r.prompt.text));
        if (j.contains("dropped")) r.prompt.dropped_ids = j["dropped"].get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("prompt record: ") + e.what());
    }
}

std::vector<GeneratedComment> generate_all(llm::LlmBackend& backend, const std::vector<PromptRecord>& prompts,
                                           const GenerationSettings& settings) {
    std::vector<GeneratedComment> out(prompts.size());
    std::vector<std::exception_ptr> errors(prompts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < prompts.size(); i = next++) {
            try {
                llm::LlmRequest req;
                req.model = settings.model;
                req.prompt = prompts[i].prompt.text;
                req.temperature = settings.temperature;
                req.max_tokens = settings.max_tokens;
                req.tag = prompts[i].id;
                auto res = backend.complete(req);
                out[i] = {prompts[i].id, std::move(res.text), res.cache_hit};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(settings.concurrency, prompts.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

namespace {

eval::MetricReport score(const corpus::Corpus& queries, const std::map<std::string, std::string>& outputs,
                         const std::string& what) {
    std::vector<std::string> ids, cands, refs;
    for (const auto& q : queries) {
        const auto it = outputs.find(q.id);
        if (it == outputs.end()) throw DataError(what + ": no output for '" + q.id + "'");
        ids.push_back(q.id);
        cands.push_back(it->second);
        refs.push_back(q.comment);
    }
    return eval::evaluate(ids, cands, refs);
}

json wilcoxon_json(const SignificanceResult& s) {
    if (!s.result) return json{{"error", s.error}};
    const auto& r = *s.result;
    return json{{"p_value", r.p_value}, {"w_plus", r.w_plus}, {"w_minus", r.w_minus},
                {"n_nonzero", r.n_nonzero}, {"exact", r.exact}};
}

std::vector<std::string> join_outputs(const std::vector<GeneratedComment>& generated,
                                      std::map<std::string, std::string>& into) {
    std::vector<std::string> ids;
    for (const auto& g : generated) {
        into[g.id] = g.comment;
        ids.push_back(g.id);
    }
    return ids;
}

AblationRow run_row(const RetrievalContext& ctx, const retrieval::RetrievalConfig& config, promptgen::ShotMode mode,
                    const promptgen::PromptTemplate& tmpl, promptgen::PromptOptions options,
                    llm::LlmBackend& backend, const GenerationSettings& settings, std::string label) {
    options.mode = mode;
    std::vector<retrieval::DemonstrationSet> demos;
    if (mode != promptgen::ShotMode::zero) demos = retrieve_all(ctx, config);
    const auto prompts = render_all(ctx.queries, demos, tmpl, options);
    const auto generated = generate_all(backend, prompts, settings);
    std::map<std::string, std::string> outputs;
    join_outputs(generated, outputs);
    return {std::move(label), score(ctx.queries, outputs, "generation")};
}

}  // namespace

EvaluationOutcome evaluate_outputs(const corpus::Corpus& queries, const std::map<std::string, std::string>& generated,
                                   const std::map<std::string, std::map<std::string, std::string>>& baselines) {
    if (queries.empty()) throw DataError("evaluate: no query pairs");
    EvaluationOutcome out;
    out.report = score(queries, generated, "generation");
    for (const auto& [name, outputs] : baselines) {
        BaselineComparison cmp;
        cmp.name = name;
        cmp.report = score(queries, outputs, "baseline " + name);
        for (const auto metric : eval::kAllMetrics) {
            const auto a = eval::per_sample_column(out.report, metric);
            const auto b = eval::per_sample_column(cmp.report, metric);
            SignificanceResult s;
            try {
                s.result = eval::wilcoxon_signed_rank(a, b);
            } catch (const UsageError& e) {
                s.error = e.what();
            }
            cmp.wilcoxon.emplace(std::string(eval::to_string(metric)), std::move(s));
        }
        out.baselines.push_back(std::move(cmp));
    }
    return out;
}

json to_json(const EvaluationOutcome& outcome) {
    json baselines = json::object();
    for (const auto& b : outcome.baselines) {
        json tests = json::object();
        for (const auto& [metric, s] : b.wilcoxon) tests[metric] = wilcoxon_json(s);
        baselines[b.name] = {{"report", eval::to_json(b.report)}, {"wilcoxon", tests}};
    }
    return json{{"approach", eval::to_json(outcome.report)}, {"baselines", baselines}};
}

std::vector<AblationRow> shot_sweep(const RetrievalContext& ctx, const retrieval::RetrievalConfig& base,
                                    const std::vector<std::size_t>& shots, const promptgen::PromptTemplate& tmpl,
                                    const promptgen::PromptOptions& prompt_options, llm::LlmBackend& backend,
                                    const GenerationSettings& settings) {
    std::vector<AblationRow> rows;
    for (const auto s : shots) {
        auto config = base;
        promptgen::ShotMode mode = promptgen::ShotMode::few;
        if (s == 0) {
            mode = promptgen::ShotMode::zero;
        } else {
            config.k = s;
            config.n = std::max(config.n, s);
            if (s == 1) mode = promptgen::ShotMode::one;
        }
        rows.push_back(run_row(ctx, config, mode, tmpl, prompt_options, backend, settings, std::to_string(s) + "-shot"));
    }
    return rows;
}

std::vector<AblationRow> strategy_sweep(const RetrievalContext& ctx, const retrieval::RetrievalConfig& base,
                                        const std::vector<retrieval::Strategy>& strategies,
                                        const promptgen::PromptTemplate& tmpl,
                                        const promptgen::PromptOptions& prompt_options, llm::LlmBackend& backend,
                                        const GenerationSettings& settings) {
    std::vector<AblationRow> rows;
    for (const auto s : strategies) {
        auto config = base;
        config.strategy = s;
        const auto mode = config.k == 1 ? promptgen::ShotMode::one : promptgen::ShotMode::few;
        rows.push_back(run_row(ctx, config, mode, tmpl, prompt_options, backend, settings,
                               std::string(retrieval::to_string(s))));
    }
    return rows;
}

json to_json(const std::vector<AblationRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"label", r.label},
                       {"bleu4", r.report.bleu4},
                       {"rouge1", r.report.rouge1},
                       {"rouge2", r.report.rouge2},
                       {"rougeL", r.report.rougeL},
                       {"n", r.report.n()}});
    }
    return out;
}

std::string format_table(const std::vector<AblationRow>& rows, const std::string& first_column) {
    std::size_t width = first_column.size();
    for (const auto& r : rows) width = std::max(width, r.label.size());
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-*s  %8s  %8s  %8s  %8s\n", static_cast<int>(width), first_column.c_str(),
                  "BLEU-4", "ROUGE-1", "ROUGE-2", "ROUGE-L");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %8.2f  %8.2f  %8.2f  %8.2f\n", static_cast<int>(width), r.label.c_str(),
                      r.report.bleu4, r.report.rouge1, r.report.rouge2, r.report.rougeL);
        out += buf;
    }
    return out;
}

PipelineRun run_pipeline(const corpus::Corpus& input, const PipelineSpec& spec, llm::LlmBackend& backend) {
    PipelineRun run;
    auto cleaned = corpus::clean(input, spec.clean);
    run.cleaned = std::move(cleaned.corpus);
    run.removed = std::move(cleaned.removed);
    run.split = corpus::split(run.cleaned, spec.ratios, spec.split_seed);

    if (spec.embeddings != nullptr) {
        run.embeddings = select_rows(*spec.embeddings, run.split);
    } else {
        std::vector<std::string> ids, codes;
        for (const auto& p : run.split) {
            ids.push_back(p.id);
            codes.push_back(p.code);
        }
        run.embeddings = semantic::HashingEmbedder(spec.D).embed_all(ids, codes);
    }
    run.model = semantic::fit_whitening(select_rows(run.embeddings, run.split.subset(corpus::Split::train)), spec.d);

    const auto ctx = make_context(run.split, corpus::Split::test, run.embeddings, run.model);
    run.demos = retrieve_all(ctx, spec.retrieval);
    run.prompts = render_all(ctx.queries, run.demos, promptgen::PromptTemplate::standard(), spec.prompt);
    run.generated = generate_all(backend, run.prompts, spec.generation);
    run.reuse_top1 = reuse_top1_all(ctx, spec.retrieval);

    std::map<std::string, std::string> generated, reuse;
    join_outputs(run.generated, generated);
    for (std::size_t i = 0; i < ctx.queries.size(); ++i) reuse[ctx.queries[i].id] = run.reuse_top1[i];
    run.evaluation = evaluate_outputs(ctx.queries, generated, {{"reuse-top1", reuse}});
    return run;
}

}  // namespace scc::pipeline
