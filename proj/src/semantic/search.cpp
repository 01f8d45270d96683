#include "scc/semantic/search.hpp"

#include <algorithm>

#include "scc/common/error.hpp"
#include "scc/simd/kernels.hpp"

namespace scc::semantic {

double semantic_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw UsageError("semantic_distance: length mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    }
    return simd::squared_l2(a, b);
}

namespace {

template <class T>
std::vector<Neighbor> scan(const DenseIndex<T>& index, std::span<const T> query, std::size_t n,
                           std::string_view exclude_id) {
    if (query.size() != index.dim) {
        throw UsageError("top_n: query has length " + std::to_string(query.size()) +
                         ", index expects " + std::to_string(index.dim));
    }
    std::vector<Neighbor> all;
    all.reserve(index.rows());
    for (std::size_t r = 0; r < index.rows(); ++r) {
        if (!exclude_id.empty() && index.ids[r] == exclude_id) continue;
        all.push_back({r, simd::squared_l2(index.row(r), query)});
    }
    auto closer = [&index](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return index.ids[a.row] < index.ids[b.row];
    };
    const std::size_t keep = std::min(n, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), closer);
    all.resize(keep);
    return all;
}

}  // namespace

std::vector<Neighbor> top_n(const DenseIndex<double>& index, std::span<const double> query,
                            std::size_t n, std::string_view exclude_id) {
    return scan(index, query, n, exclude_id);
}

std::vector<Neighbor> top_n(const DenseIndex<float>& index, std::span<const float> query,
                            std::size_t n, std::string_view exclude_id) {
    return scan(index, query, n, exclude_id);
}

}  // namespace scc::semantic
