#pragma once

// Independent reference implementations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "scc/codeform/similarity.hpp"
#include "scc/corpus/corpus.hpp"
#include "scc/semantic/embedding.hpp"
#include "scc/semantic/hashing_embedder.hpp"
#include "scc/semantic/whitening.hpp"

namespace oracle {

// Levenshtein by plain recursion over prefixes.
inline std::size_t lev_recursive(const std::vector<std::string>& a, std::size_t i, const std::vector<std::string>& b,
                                 std::size_t j) {
    if (i == 0) return j;
    if (j == 0) return i;
    const std::size_t sub = lev_recursive(a, i - 1, b, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    const std::size_t del = lev_recursive(a, i - 1, b, j) + 1;
    const std::size_t ins = lev_recursive(a, i, b, j - 1) + 1;
    return std::min({sub, del, ins});
}

inline std::size_t lev_recursive(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return lev_recursive(a, a.size(), b, b.size());
}

// Levenshtein by the full (n+1)x(m+1) matrix.
inline std::size_t lev_matrix(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
        }
    }
    return d[a.size()][b.size()];
}

// All sequences of length 0..max_len over the alphabet.
inline std::vector<std::vector<std::string>> all_sequences(const std::vector<std::string>& alphabet,
                                                           std::size_t max_len) {
    std::vector<std::vector<std::string>> out{{}};
    std::vector<std::vector<std::string>> frontier{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::vector<std::string>> next;
        for (const auto& s : frontier) {
            for (const auto& sym : alphabet) {
                auto t = s;
                t.push_back(sym);
                next.push_back(t);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

// Two-sided Wilcoxon p-value by enumerating all 2^m sign assignments.
inline double wilcoxon_enumerated(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) d.push_back(a[i] - b[i]);
    }
    const std::size_t m = d.size();
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m; ++i) {
        double less = 0, equal = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (std::fabs(d[j]) < std::fabs(d[i])) ++less;
            if (std::fabs(d[j]) == std::fabs(d[i])) ++equal;
        }
        ranks[i] = less + (equal + 1) / 2.0;
    }
    double observed = 0, total = 0;
    for (std::size_t i = 0; i < m; ++i) {
        total += ranks[i];
        if (d[i] > 0) observed += ranks[i];
    }
    const double mean = total / 2;
    const double dev = std::fabs(observed - mean);
    std::size_t extreme = 0;
    const std::size_t count = std::size_t{1} << m;
    for (std::size_t mask = 0; mask < count; ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (std::size_t{1} << i)) w += ranks[i];
        }
        if (std::fabs(w - mean) >= dev - 1e-12) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(count);
}

// Brute-force (x - mean) . W
inline std::vector<double> whiten_naive(const scc::semantic::WhiteningModel& m, std::span<const float> x) {
    std::vector<double> out(m.output_dim, 0.0);
    for (std::size_t j = 0; j < m.output_dim; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < m.input_dim; ++i) {
            s += (static_cast<double>(x[i]) - m.mean[i]) * m.projection[i * m.output_dim + j];
        }
        out[j] = s;
    }
    return out;
}

struct OracleDemo {
    std::string id;
    double distance;
    double mixed;
};

// Scores every train pair by squared L2 on whitened vectors, keeps the exact
// top-n by (distance, id), reranks those by (mixed desc, id) and keeps k.
inline std::vector<OracleDemo> retrieve_brute_force(const scc::corpus::Corpus& train,
                                                    const scc::semantic::EmbeddingMatrix& emb,
                                                    const scc::semantic::WhiteningModel& model,
                                                    const std::string& query_id, const std::string& query_code,
                                                    std::size_t n, std::size_t k, double lambda) {
    const auto q = whiten_naive(model, emb.row(*emb.find(query_id)));
    std::vector<OracleDemo> all;
    for (const auto& p : train) {
        if (p.id == query_id) continue;
        const auto v = whiten_naive(model, emb.row(*emb.find(p.id)));
        double d = 0;
        for (std::size_t i = 0; i < v.size(); ++i) d += (v[i] - q[i]) * (v[i] - q[i]);
        all.push_back({p.id, d, 0.0});
    }
    std::sort(all.begin(), all.end(), [](const OracleDemo& a, const OracleDemo& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    });
    if (all.size() > n) all.resize(n);
    for (auto& c : all) {
        const auto& code = train.find(c.id)->code;
        const double lex = scc::codeform::lexical_similarity(query_code, code);
        const double syn = scc::codeform::syntactic_similarity(query_code, code);
        c.mixed = lambda * lex + (1 - lambda) * syn;
    }
    std::sort(all.begin(), all.end(), [](const OracleDemo& a, const OracleDemo& b) {
        return a.mixed != b.mixed ? a.mixed > b.mixed : a.id < b.id;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

// Small random Solidity-like corpus; some codes repeat so ties occur.
inline scc::corpus::Corpus random_corpus(std::uint64_t seed, std::size_t size) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> names = {"balance", "owner", "amount", "reward", "token", "supply", "fee", "rate"};
    const std::vector<std::string> verbs = {"get", "set", "add", "burn", "mint", "claim"};
    auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
    scc::corpus::Corpus out;
    for (std::size_t i = 0; i < size; ++i) {
        const std::string verb = pick(verbs), a = pick(names), b = pick(names);
        std::string code;
        switch (rng() % 4) {
            case 0:
                code = "function " + verb + a + "(address who) public view returns (uint256) { return " + a + "s[who]; }";
                break;
            case 1:
                code = "function " + verb + a + "(uint256 " + b + ") external { require(" + b + " > 0); " + a + " += " +
                       b + "; }";
                break;
            case 2:
                code = "function " + verb + "(address to, uint256 " + b + ") internal returns (bool) { " + a +
                       "s[to] = " + a + "s[to] + " + b + "; emit " + verb + "ed(to, " + b + "); return true; }";
                break;
            default:
                code = "modifier only" + a + "() { require(msg.sender == " + b + "); _; }";
                break;
        }
        char id[32];
        std::snprintf(id, sizeof id, "r%03zu", i);
        out.add({id, code, "comment number " + std::to_string(i) + " for " + a, scc::corpus::Split::train});
    }
    return out;
}

inline scc::semantic::EmbeddingMatrix embed(const scc::corpus::Corpus& c, std::size_t dim) {
    std::vector<std::string> ids, codes;
    for (const auto& p : c) {
        ids.push_back(p.id);
        codes.push_back(p.code);
    }
    return scc::semantic::HashingEmbedder(dim).embed_all(ids, codes);
}

}  // namespace oracle
