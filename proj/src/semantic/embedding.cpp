#include "scc/semantic/embedding.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "binary_io.hpp"
#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"

namespace scc::semantic {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim,
                                 std::vector<float> data)
    : ids_(std::move(ids)), dim_(dim), data_(std::move(data)) {
    if (data_.size() != ids_.size() * dim_) {
        throw DataError("embedding matrix: " + std::to_string(ids_.size()) + " ids x " +
                        std::to_string(dim_) + " dims does not match " +
                        std::to_string(data_.size()) + " values");
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (!index_.emplace(ids_[i], i).second) {
            throw DataError("embedding matrix: duplicate id \"" + ids_[i] + "\"");
        }
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw DataError("embedding matrix: non-finite value in row \"" + ids_[i / dim_] + "\"");
        }
    }
}

std::optional<std::size_t> EmbeddingMatrix::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void write_sceb(const EmbeddingMatrix& m, std::ostream& out) {
    constexpr auto u32max = std::numeric_limits<std::uint32_t>::max();
    if (m.rows() > u32max || m.dim() > u32max) throw DataError("SCEB: matrix too large");
    out.write("SCEB", 4);
    binio::put_u32(out, 1);
    binio::put_u32(out, static_cast<std::uint32_t>(m.rows()));
    binio::put_u32(out, static_cast<std::uint32_t>(m.dim()));
    for (const auto& id : m.ids()) {
        binio::put_u32(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
    for (float v : m.data()) binio::put_f32(out, v);
}

EmbeddingMatrix read_sceb(std::istream& in) {
    binio::expect_magic(in, "SCEB", "SCEB");
    const auto version = binio::get_u32(in, "SCEB version");
    if (version != 1) throw DataError("SCEB: unsupported version " + std::to_string(version));
    const auto rows = binio::get_u32(in, "SCEB header");
    const auto dim = binio::get_u32(in, "SCEB header");
    if (rows > 0 && dim == 0) throw DataError("SCEB: zero dimension with nonzero rows");

    std::vector<std::string> ids;
    ids.reserve(rows);
    for (std::uint32_t i = 0; i < rows; ++i) {
        const auto len = binio::get_u32(in, "SCEB id length");
        std::string id(len, '\0');
        in.read(id.data(), len);
        if (in.gcount() != static_cast<std::streamsize>(len)) {
            throw DataError("SCEB: truncated payload in id " + std::to_string(i));
        }
        ids.push_back(std::move(id));
    }
    const std::size_t count = static_cast<std::size_t>(rows) * dim;
    std::vector<float> data;
    data.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (in.peek() == std::char_traits<char>::eof()) {
            throw DataError("SCEB: truncated payload: header declares " + std::to_string(rows) +
                            " rows of " + std::to_string(dim) + " but only " +
                            std::to_string(i / dim) + " complete rows present");
        }
        data.push_back(binio::get_f32(in, "SCEB payload"));
    }
    binio::expect_end(in, "SCEB");
    return EmbeddingMatrix(std::move(ids), dim, std::move(data));
}

void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
    std::ostringstream buffer;
    write_sceb(m, buffer);
    write_file_atomic(path, buffer.str());
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return read_sceb(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace scc::semantic
