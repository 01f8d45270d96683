#include "scc/pipeline/embed_client.hpp"

#include <cmath>
#include <fstream>

#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"

namespace scc::pipeline {

semantic::EmbeddingMatrix embed_via_service(llm::HttpTransport& transport, const corpus::Corpus& corpus,
                                            const EmbedServiceOptions& options) {
    if (options.batch_size == 0 || options.batch_size > kMaxEmbedBatch) {
        throw UsageError("embed: batch size must be within 1.." + std::to_string(kMaxEmbedBatch));
    }
    std::vector<std::string> ids;
    std::vector<float> data;
    data.reserve(corpus.size() * options.expected_dim);
    for (std::size_t start = 0; start < corpus.size(); start += options.batch_size) {
        const std::size_t end = std::min(corpus.size(), start + options.batch_size);
        json texts = json::array();
        for (std::size_t i = start; i < end; ++i) texts.push_back(corpus[i].code);
        const json body{{"texts", texts}, {"pooling", options.pooling}, {"max_length", options.max_length}};
        const auto res = transport.post_json("/embed", body.dump(), {});
        if (res.status != 200) {
            throw RemoteError("embed service: " + (res.status == 0 ? "transport error: " + res.error
                                                                   : "HTTP " + std::to_string(res.status)) +
                              " for batch starting at '" + corpus[start].id + "'");
        }
        json reply;
        try {
            reply = json::parse(res.body);
            const auto& vectors = reply.at("vectors");
            if (!vectors.is_array() || vectors.size() != end - start) {
                throw RemoteError("embed service: expected " + std::to_string(end - start) + " vectors");
            }
            for (std::size_t i = 0; i < vectors.size(); ++i) {
                const auto& row = vectors[i];
                if (!row.is_array() || row.size() != options.expected_dim) {
                    throw RemoteError("embed service: vector for '" + corpus[start + i].id + "' has wrong dimension");
                }
                for (const auto& v : row) {
                    const auto f = v.get<float>();
                    if (!std::isfinite(f)) {
                        throw RemoteError("embed service: non-finite value for '" + corpus[start + i].id + "'");
                    }
                    data.push_back(f);
                }
                ids.push_back(corpus[start + i].id);
            }
        } catch (const json::exception& e) {
            throw RemoteError(std::string("embed service: malformed reply: ") + e.what());
        }
    }
    return semantic::EmbeddingMatrix(std::move(ids), options.expected_dim, std::move(data));
}

semantic::EmbeddingMatrix select_rows(const semantic::EmbeddingMatrix& m, const corpus::Corpus& corpus) {
    std::vector<std::string> ids;
    std::vector<float> data;
    data.reserve(corpus.size() * m.dim());
    for (const auto& p : corpus) {
        const auto row = m.find(p.id);
        if (!row) throw DataError("embeddings: no vector for '" + p.id + "'");
        const auto values = m.row(*row);
        data.insert(data.end(), values.begin(), values.end());
        ids.push_back(p.id);
    }
    return semantic::EmbeddingMatrix(std::move(ids), m.dim(), std::move(data));
}

semantic::EmbeddingMatrix import_embeddings(const std::filesystem::path& path, const corpus::Corpus& corpus) {
    char magic[4] = {};
    {
        auto in = open_input(path);
        in.read(magic, 4);
    }
    if (std::string_view(magic, 4) == "SCEB") return select_rows(semantic::load_embeddings(path), corpus);

    std::vector<std::string> ids;
    std::vector<float> data;
    std::size_t dim = 0;
    for_each_jsonl(path, [&](std::size_t line, const json& j) {
        const auto where = path.string() + ":" + std::to_string(line);
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("vector") ||
            !j["vector"].is_array()) {
            throw DataError(where + ": expected {\"id\": string, \"vector\": [numbers]}");
        }
        const auto& v = j["vector"];
        if (ids.empty()) dim = v.size();
        if (v.size() != dim || dim == 0) throw DataError(where + ": vector dimension " + std::to_string(v.size()));
        for (const auto& x : v) {
            if (!x.is_number()) throw DataError(where + ": non-numeric vector entry");
            data.push_back(x.get<float>());
        }
        ids.push_back(j["id"].get<std::string>());
    });
    if (ids.empty()) throw DataError("embeddings: " + path.string() + " is empty");
    return select_rows(semantic::EmbeddingMatrix(std::move(ids), dim, std::move(data)), corpus);
}

}  // namespace scc::pipeline
