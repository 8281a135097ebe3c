#include <doctest.h>

#include <cmath>
#include <random>

#include "relwords/clustering.hpp"
#include "relwords/embedding.hpp"
#include "relwords/error.hpp"
#include "support.hpp"

using namespace relwords;
using relwords::testing::random_feature_matrix;

namespace {

FeatureMatrix dense(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix m;
    const std::size_t t = rows.front().size();
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < t; ++i) terms.push_back("t" + std::to_string(i));
    m.vocab = Vocabulary(terms, std::vector<std::size_t>(t, 1), rows.size());
    m.idf.assign(t, 1.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        SparseRow r;
        for (TermId i = 0; i < t; ++i) {
            if (rows[k][i] != 0.0) r.emplace_back(i, rows[k][i]);
        }
        m.rows.push_back(r);
        m.doc_ids.push_back("d" + std::to_string(k));
    }
    return m;
}

double relative_reconstruction_error(const Eigen::MatrixXd& y, const Eigen::MatrixXd& centered) {
    return (y * y.transpose() - centered).norm() / centered.norm();
}

}  // namespace

TEST_CASE("identical documents are a degenerate corpus") {
    const auto m = dense({{1, 2, 0}, {1, 2, 0}, {1, 2, 0}});
    CHECK_THROWS_WITH_AS(fit_kpca(m), doctest::Contains("degenerate corpus"), Error);
    CHECK_THROWS_AS(fit_kpca(dense({{1, 2}})), Error);
}

TEST_CASE("three orthogonal unit rows embed as an equilateral triangle") {
    // Centered Gram = I - J/3 has eigenvalues {1, 1, 0}; every embedded point has
    // squared norm 2/3 and every pair is 2 apart in squared distance.
    const auto m = dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const auto model = fit_kpca(m);
    REQUIRE(model.n_components() == 2);
    CHECK(model.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
    const auto emb = transform(model, m);
    const Eigen::MatrixXd& y = emb.coords;
    for (int a = 0; a < 3; ++a) {
        CHECK(y.row(a).squaredNorm() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        for (int b = a + 1; b < 3; ++b) CHECK((y.row(a) - y.row(b)).squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
    }
    // Centered vertices of a triangle are 120 degrees apart.
    const auto dist = pairwise_distances(emb);
    CHECK(dist(0, 1) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("dual coefficients are normalized and eigenvalues sorted") {
    std::mt19937_64 rng(12);
    const auto m = random_feature_matrix(rng, 40, 60, 0.2);
    const auto model = fit_kpca(m);
    for (Eigen::Index d = 0; d < model.eigenvalues.size(); ++d) {
        CHECK(model.eigenvalues(d) > 0.0);
        if (d > 0) CHECK(model.eigenvalues(d - 1) >= model.eigenvalues(d));
        const auto& alpha = model.dual_coefficients.col(d);
        CHECK(model.eigenvalues(d) * alpha.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
        Eigen::Index arg = 0;
        alpha.cwiseAbs().maxCoeff(&arg);
        CHECK(alpha(arg) > 0.0);
    }
    CHECK(model.n_components() <= m.n_docs() - 1);
}

TEST_CASE("component cap applies") {
    std::mt19937_64 rng(13);
    const auto m = random_feature_matrix(rng, 300, 400, 0.05);
    const auto model = fit_kpca(m, 250);
    CHECK(model.n_components() == 250);
    CHECK(fit_kpca(m, 7).n_components() == 7);
}

TEST_CASE("spectral reconstruction with all positive components") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = random_feature_matrix(rng, 30 + 15 * static_cast<std::size_t>(trial), 80, 0.15);
        const auto model = fit_kpca(m, m.n_docs());
        const auto emb = transform(model, m);
        CHECK(relative_reconstruction_error(emb.coords, double_center(gram_matrix(m.rows))) <= 1e-8);
    }
}

TEST_CASE("duplicates and new documents") {
    std::mt19937_64 rng(15);
    auto m = random_feature_matrix(rng, 20, 30, 0.3);
    m.rows[11] = m.rows[4];
    const auto model = fit_kpca(m);
    const auto emb = transform(model, m);
    CHECK(emb.coords.row(11) == emb.coords.row(4));

    FeatureMatrix one;
    one.vocab = m.vocab;
    one.idf = m.idf;
    one.rows = {m.rows[7]};
    one.doc_ids = {"new"};
    const auto single = transform(model, one);
    REQUIRE(single.rows() == 1);
    CHECK((single.coords.row(0) - emb.coords.row(7)).norm() <= 1e-12);

    FeatureMatrix narrow = dense({{1, 0}, {0, 1}});
    CHECK_THROWS_WITH_AS(transform(model, narrow), doctest::Contains("vocabulary dimension"), Error);
}

TEST_CASE("flipping a component's sign leaves cosines unchanged") {
    std::mt19937_64 rng(16);
    const auto m = random_feature_matrix(rng, 25, 40, 0.2);
    auto emb = transform(fit_kpca(m), m);
    const auto before = pairwise_distances(emb);
    emb.coords.col(0) *= -1.0;
    emb.coords.col(emb.coords.cols() - 1) *= -1.0;
    const auto after = pairwise_distances(emb);
    for (std::size_t a = 0; a < before.size(); ++a) {
        for (std::size_t b = 0; b < before.size(); ++b) CHECK(std::abs(before(a, b) - after(a, b)) <= 1e-12);
    }
}

TEST_CASE("fitting is bitwise reproducible") {
    std::mt19937_64 rng(17);
    const auto m = random_feature_matrix(rng, 30, 50, 0.2);
    const auto a = transform(fit_kpca(m), m);
    const auto b = transform(fit_kpca(m), m);
    CHECK(a.coords == b.coords);
}
