#include "relwords/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

Eigen::MatrixXd gram_matrix(const std::vector<SparseRow>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a; b < n; ++b) {
            const double v = dot(rows[a], rows[b]);
            k(a, b) = v;
            k(b, a) = v;
        }
    }
    return k;
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd& gram) {
    const auto n = gram.rows();
    const Eigen::VectorXd means = gram.colwise().mean().transpose();
    const double grand = means.mean();
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) out(a, b) = gram(a, b) - means(a) - means(b) + grand;
    }
    return out;
}

KpcaModel fit_kpca(const FeatureMatrix& matrix, std::size_t max_components) {
    const std::size_t n = matrix.n_docs();
    if (n < 2) throw Error("kernel PCA needs at least 2 documents, got " + std::to_string(n));
    if (max_components < 1) throw Error("kernel PCA needs max_components >= 1");

    const Eigen::MatrixXd gram = gram_matrix(matrix.rows);
    KpcaModel model;
    model.training_rows = matrix.rows;
    model.n_terms = matrix.n_terms();
    model.gram_column_means = gram.colwise().mean().transpose();
    model.gram_grand_mean = model.gram_column_means.mean();
    const Eigen::MatrixXd centered = double_center(gram);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
    if (solver.info() != Eigen::Success) throw Error("kernel PCA: eigendecomposition failed");
    // Eigen returns ascending eigenvalues.
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    const auto nn = static_cast<Eigen::Index>(n);
    const double lambda_max = values(nn - 1);
    if (!(lambda_max > 0.0) || centered.cwiseAbs().maxCoeff() == 0.0) {
        throw Error("degenerate corpus: centered Gram matrix has no positive eigenvalue");
    }

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = nn - 1; i >= 0 && kept.size() < max_components; --i) {
        if (values(i) > kRankTolerance * lambda_max) kept.push_back(i);
    }
    if (kept.empty()) throw Error("degenerate corpus: no component above rank tolerance");

    const auto d = static_cast<Eigen::Index>(kept.size());
    model.eigenvalues.resize(d);
    model.dual_coefficients.resize(nn, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        const double lambda = values(kept[c]);
        Eigen::VectorXd alpha = vectors.col(kept[c]) / std::sqrt(lambda);
        Eigen::Index arg = 0;
        alpha.cwiseAbs().maxCoeff(&arg);
        if (alpha(arg) < 0.0) alpha = -alpha;
        model.eigenvalues(c) = lambda;
        model.dual_coefficients.col(c) = alpha;
    }
    return model;
}

Embedding transform(const KpcaModel& model, const FeatureMatrix& matrix) {
    if (matrix.n_terms() != model.n_terms) {
        throw Error("kernel PCA transform: vocabulary dimension " + std::to_string(matrix.n_terms()) +
                    " does not match the fitted model (" + std::to_string(model.n_terms) + ")");
    }
    const auto n_train = static_cast<Eigen::Index>(model.n_training());
    Embedding out;
    out.doc_ids = matrix.doc_ids;
    out.coords.resize(static_cast<Eigen::Index>(matrix.n_docs()), model.dual_coefficients.cols());

    Eigen::VectorXd kernel(n_train);
    for (std::size_t k = 0; k < matrix.n_docs(); ++k) {
        for (Eigen::Index j = 0; j < n_train; ++j) kernel(j) = dot(matrix.rows[k], model.training_rows[j]);
        const double row_mean = kernel.mean();
        for (Eigen::Index j = 0; j < n_train; ++j) {
            kernel(j) = kernel(j) - row_mean - model.gram_column_means(j) + model.gram_grand_mean;
        }
        out.coords.row(static_cast<Eigen::Index>(k)) = kernel.transpose() * model.dual_coefficients;
    }
    if (!out.coords.allFinite()) throw Error("kernel PCA transform produced non-finite coordinates");
    return out;
}

void write_embedding_csv(const Embedding& embedding, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t k = 0; k < embedding.rows(); ++k) {
        out += csv_field(embedding.doc_ids[k]);
        for (Eigen::Index d = 0; d < embedding.coords.cols(); ++d) {
            out += ',' + format_double(embedding.coords(static_cast<Eigen::Index>(k), d));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace relwords
