#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace scc::semantic {

/// N x D single-precision embeddings with one id per row.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;

    /// Validates shape, id uniqueness, and finiteness; throws DataError.
    EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim, std::vector<float> data);

    std::size_t rows() const noexcept { return ids_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const std::string> ids() const noexcept { return ids_; }
    std::span<const float> data() const noexcept { return data_; }

    std::span<const float> row(std::size_t i) const {
        return std::span<const float>(data_).subspan(i * dim_, dim_);
    }

    std::optional<std::size_t> find(const std::string& id) const;

    bool operator==(const EmbeddingMatrix& other) const {
        return dim_ == other.dim_ && ids_ == other.ids_ && data_ == other.data_;
    }

private:
    std::vector<std::string> ids_;
    std::size_t dim_ = 0;
    std::vector<float> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

// SCEB layout (little-endian):
//   "SCEB" | u32 version=1 | u32 N | u32 D | N x (u32 len, utf-8 id) | N*D f32 row-major

void write_sceb(const EmbeddingMatrix& m, std::ostream& out);
EmbeddingMatrix read_sceb(std::istream& in);

void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

}  // namespace scc::semantic
