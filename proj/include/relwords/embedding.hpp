#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relwords/features.hpp"

namespace relwords {

inline constexpr std::size_t kDefaultComponents = 250;
// Components with eigenvalue <= kRankTolerance * largest eigenvalue are dropped.
inline constexpr double kRankTolerance = 1e-10;

// Linear-kernel PCA fitted on a tf-idf matrix.
//
// The Gram matrix K = X X^T is double-centered,
//   K' = K - 1K/N - K1/N + 1K1/N^2,
// and eigendecomposed. Each kept eigenvector v_d is rescaled to the dual
// coefficient alpha_d = v_d / sqrt(lambda_d) so that lambda_d (alpha_d . alpha_d) = 1,
// then sign-normalized so its largest-magnitude entry is positive.
struct KpcaModel {
    std::vector<SparseRow> training_rows;
    std::size_t n_terms = 0;
    Eigen::VectorXd gram_column_means;  // length N
    double gram_grand_mean = 0.0;
    Eigen::VectorXd eigenvalues;        // descending, > 0, length D
    Eigen::MatrixXd dual_coefficients;  // N x D

    std::size_t n_components() const { return static_cast<std::size_t>(eigenvalues.size()); }
    std::size_t n_training() const { return training_rows.size(); }
};

struct Embedding {
    std::vector<std::string> doc_ids;
    Eigen::MatrixXd coords;  // N x D, row k = document k

    std::size_t rows() const { return static_cast<std::size_t>(coords.rows()); }
    std::size_t dims() const { return static_cast<std::size_t>(coords.cols()); }
};

// Uncentered Gram matrix of the sparse rows, computed once per unordered pair.
Eigen::MatrixXd gram_matrix(const std::vector<SparseRow>& rows);

Eigen::MatrixXd double_center(const Eigen::MatrixXd& gram);

KpcaModel fit_kpca(const FeatureMatrix& matrix, std::size_t max_components = kDefaultComponents);

// Row k: sum_j alpha_jd * centered k(x_k, x_j) over the training rows.
Embedding transform(const KpcaModel& model, const FeatureMatrix& matrix);

// CSV: doc_id followed by D coordinates.
void write_embedding_csv(const Embedding& embedding, const std::filesystem::path& path);

}  // namespace relwords
