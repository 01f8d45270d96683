#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scc::semantic {

/// Squared Euclidean distance between whitened vectors. Smaller is closer.
double semantic_distance(std::span<const double> a, std::span<const double> b);

struct Neighbor {
    std::size_t row = 0;
    double distance = 0.0;
};

/// Dense row-major vectors with an id per row, scanned exhaustively.
template <class T>
struct DenseIndex {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    std::vector<T> data;

    std::size_t rows() const noexcept { return ids.size(); }
    std::span<const T> row(std::size_t i) const {
        return std::span<const T>(data).subspan(i * dim, dim);
    }
};

/// The n rows closest to the query, ascending by distance with ties broken by
/// ascending id. A row whose id equals `exclude_id` is skipped. Returns every
/// eligible row when fewer than n exist.
std::vector<Neighbor> top_n(const DenseIndex<double>& index, std::span<const double> query,
                            std::size_t n, std::string_view exclude_id = {});
std::vector<Neighbor> top_n(const DenseIndex<float>& index, std::span<const float> query,
                            std::size_t n, std::string_view exclude_id = {});

}  // namespace scc::semantic
