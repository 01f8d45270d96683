#include "scc/semantic/whitening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "binary_io.hpp"
#include "scc/common/error.hpp"
#include "scc/common/jsonl.hpp"
#include "scc/simd/kernels.hpp"

namespace scc::semantic {

namespace {

struct CovarianceSpectrum {
    Eigen::VectorXd mean;
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd eigenvectors;  // columns aligned with eigenvalues
};

CovarianceSpectrum spectrum_of(const EmbeddingMatrix& train) {
    const auto n = static_cast<Eigen::Index>(train.rows());
    const auto dim = static_cast<Eigen::Index>(train.dim());
    Eigen::MatrixXd x(n, dim);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto row = train.row(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < dim; ++c) x(r, c) = row[static_cast<std::size_t>(c)];
    }
    CovarianceSpectrum s;
    s.mean = x.colwise().mean().transpose();
    x.rowwise() -= s.mean.transpose();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DataError("whitening: eigendecomposition failed");
    // Eigen returns ascending order
    s.eigenvalues = solver.eigenvalues().reverse();
    s.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return s;
}

std::size_t count_usable(const Eigen::VectorXd& eigenvalues) {
    std::size_t usable = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) > kEigenvalueFloor) ++usable;
    }
    return usable;
}

void check_fit_preconditions(const EmbeddingMatrix& train, std::size_t d) {
    if (train.rows() < 2) {
        throw UsageError("whitening: need at least 2 rows to fit, got " + std::to_string(train.rows()));
    }
    if (d < 1 || d > train.dim()) {
        throw UsageError("whitening: output dimension " + std::to_string(d) + " outside [1, " +
                         std::to_string(train.dim()) + "]");
    }
}

}  // namespace

std::size_t usable_rank(const EmbeddingMatrix& train) {
    if (train.rows() < 2) return 0;
    return count_usable(spectrum_of(train).eigenvalues);
}

WhiteningModel fit_whitening(const EmbeddingMatrix& train, std::size_t d) {
    check_fit_preconditions(train, d);
    const auto s = spectrum_of(train);
    const std::size_t usable = count_usable(s.eigenvalues);
    if (usable < d) {
        throw DataError("whitening: degenerate covariance, usable rank " + std::to_string(usable) +
                        " is below the requested dimension " + std::to_string(d));
    }

    WhiteningModel model;
    model.input_dim = train.dim();
    model.output_dim = d;
    model.source_count = train.rows();
    model.mean.assign(s.mean.data(), s.mean.data() + s.mean.size());
    model.projection.assign(model.input_dim * d, 0.0);

    for (std::size_t j = 0; j < d; ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        Eigen::VectorXd u = s.eigenvectors.col(col);
        Eigen::Index pivot = 0;
        for (Eigen::Index i = 1; i < u.size(); ++i) {
            if (std::abs(u(i)) > std::abs(u(pivot))) pivot = i;
        }
        if (u(pivot) < 0) u = -u;
        const double scale = 1.0 / std::sqrt(s.eigenvalues(col));
        for (std::size_t i = 0; i < model.input_dim; ++i) {
            model.projection[i * d + j] = u(static_cast<Eigen::Index>(i)) * scale;
        }
    }
    return model;
}

std::vector<double> WhiteningModel::apply(std::span<const double> x) const {
    if (x.size() != input_dim) {
        throw UsageError("whitening: input has length " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(input_dim));
    }
    std::vector<double> out(output_dim, 0.0);
    const std::span<const double> w(projection);
    for (std::size_t i = 0; i < input_dim; ++i) {
        simd::axpy(x[i] - mean[i], w.subspan(i * output_dim, output_dim), out);
    }
    return out;
}

std::vector<double> WhiteningModel::apply(std::span<const float> x) const {
    std::vector<double> widened(x.begin(), x.end());
    return apply(std::span<const double>(widened));
}

std::vector<double> WhiteningModel::apply_all(const EmbeddingMatrix& m) const {
    if (m.dim() != input_dim) {
        throw UsageError("whitening: embeddings have dimension " + std::to_string(m.dim()) +
                         ", model expects " + std::to_string(input_dim));
    }
    std::vector<double> out;
    out.reserve(m.rows() * output_dim);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto v = apply(m.row(r));
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

void write_scwh(const WhiteningModel& model, std::ostream& out) {
    out.write("SCWH", 4);
    binio::put_u32(out, 1);
    binio::put_u32(out, static_cast<std::uint32_t>(model.input_dim));
    binio::put_u32(out, static_cast<std::uint32_t>(model.output_dim));
    for (double v : model.mean) binio::put_f64(out, v);
    for (double v : model.projection) binio::put_f64(out, v);
}

WhiteningModel read_scwh(std::istream& in) {
    binio::expect_magic(in, "SCWH", "SCWH");
    const auto version = binio::get_u32(in, "SCWH version");
    if (version != 1) throw DataError("SCWH: unsupported version " + std::to_string(version));
    WhiteningModel model;
    model.input_dim = binio::get_u32(in, "SCWH header");
    model.output_dim = binio::get_u32(in, "SCWH header");
    if (model.output_dim < 1 || model.output_dim > model.input_dim) {
        throw DataError("SCWH: invalid dimensions " + std::to_string(model.input_dim) + " -> " +
                        std::to_string(model.output_dim));
    }
    model.mean.reserve(model.input_dim);
    for (std::size_t i = 0; i < model.input_dim; ++i) model.mean.push_back(binio::get_f64(in, "SCWH mean"));
    const std::size_t count = model.input_dim * model.output_dim;
    model.projection.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = binio::get_f64(in, "SCWH projection");
        if (!std::isfinite(v)) throw DataError("SCWH: non-finite projection entry");
        model.projection.push_back(v);
    }
    binio::expect_end(in, "SCWH");
    return model;
}

void save_whitening(const WhiteningModel& model, const std::filesystem::path& path) {
    std::ostringstream buffer;
    write_scwh(model, buffer);
    write_file_atomic(path, buffer.str());
}

WhiteningModel load_whitening(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return read_scwh(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace scc::semantic
