#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "scc/semantic/embedding.hpp"

namespace scc::semantic {

/// Eigenvalues at or below this are treated as zero variance.
inline constexpr double kEigenvalueFloor = 1e-10;

/// Centering plus decorrelating projection, reducing D to d dimensions.
///
/// Fitted as: mu = row mean, Sigma = (1/N) (X - mu)^T (X - mu),
/// Sigma = U diag(lambda) U^T with lambda descending,
/// W = first d columns of U diag(lambda)^(-1/2). Each eigenvector is flipped so
/// that its largest-magnitude entry is positive.
struct WhiteningModel {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::size_t source_count = 0;  // not persisted in SCWH files
    std::vector<double> mean;        // input_dim
    std::vector<double> projection;  // input_dim x output_dim, row-major

    /// (x - mean) . W; throws UsageError on a length mismatch.
    std::vector<double> apply(std::span<const float> x) const;
    std::vector<double> apply(std::span<const double> x) const;

    /// Applies the model to every row; result is rows x output_dim.
    std::vector<double> apply_all(const EmbeddingMatrix& m) const;

    bool operator==(const WhiteningModel& other) const {
        return input_dim == other.input_dim && output_dim == other.output_dim &&
               mean == other.mean && projection == other.projection;
    }
};

/// Throws UsageError when N < 2 or d is outside [1, D], and DataError when
/// fewer than d eigenvalues exceed kEigenvalueFloor (message names the rank).
WhiteningModel fit_whitening(const EmbeddingMatrix& train, std::size_t d);

/// Number of covariance eigenvalues above kEigenvalueFloor.
std::size_t usable_rank(const EmbeddingMatrix& train);

// SCWH layout (little-endian):
//   "SCWH" | u32 version=1 | u32 D | u32 d | D f64 mean | D*d f64 projection row-major

void write_scwh(const WhiteningModel& model, std::ostream& out);
WhiteningModel read_scwh(std::istream& in);

void save_whitening(const WhiteningModel& model, const std::filesystem::path& path);
WhiteningModel load_whitening(const std::filesystem::path& path);

}  // namespace scc::semantic
