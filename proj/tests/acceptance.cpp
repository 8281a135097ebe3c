// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "relwords/io.hpp"
#include "relwords/pipeline.hpp"
#include "relwords/report.hpp"
#include "support.hpp"

using namespace relwords;
namespace rt = relwords::testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

// 1. Score fixed points, exact.
Outcome score_fixed_points() {
    Outcome o;
    o.require(score_quot(0.3, 0.05) == 1.0, "score_quot(0.3, 0.05) != 1");
    o.require(score_quot(1.0, 0.05) == 1.0, "score_quot(1.0, 0.05) != 1");
    o.require(score_final(1.0, 0.0) == 1.0, "score_final(1, 0) != 1");
    for (int j = 0; j <= 100; ++j) {
        o.require(score_final(0.0, j * 0.01) == 0.0, "score_final(0, f) != 0");
    }
    return o;
}

// 2. Relevance surface on the 21 x 21 grid.
Outcome surface_shape() {
    Outcome o;
    const auto at = [](int i, int j) { return score_final(i * 0.05, j * 0.05); };
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double r = at(i, j);
            o.require(r >= 0.0 && r <= 1.0, "r outside [0, 1]");
            if (i > 0) o.require(r >= at(i - 1, j), "r decreases in TPR");
            if (j > 0) o.require(r <= at(i, j - 1), "r increases in FPR");
        }
    }
    return o;
}

// 3. DBSCAN against the brute-force density-connectivity oracle.
Outcome dbscan_oracle() {
    Outcome o;
    std::mt19937_64 rng(20170116);
    std::uniform_int_distribution<std::size_t> size(2, 200);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = rt::random_distance_matrix(rng, size(rng), trial % 2 == 0);
        const auto got = dbscan(d, 0.45, 3);
        o.require(rt::same_partition(got.labels, rt::reference_dbscan(d, 0.45, 3)),
                  "partition differs on instance " + std::to_string(trial));
    }
    return o;
}

// 4. Spectral reconstruction and duplicate rows.
Outcome kpca_reconstruction() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> size(5, 100);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto m = rt::random_feature_matrix(rng, size(rng), 120, 0.1);
        m.rows.back() = m.rows.front();
        const auto model = fit_kpca(m, m.n_docs());
        const auto y = transform(model, m).coords;
        const Eigen::MatrixXd centered = double_center(gram_matrix(m.rows));
        const double err = (y * y.transpose() - centered).norm() / centered.norm();
        worst = std::max(worst, err);
        o.require(err <= 1e-8, "relative error " + std::to_string(err));
        o.require(y.row(0) == y.row(y.rows() - 1), "duplicate documents embed differently");
    }
    if (o.ok) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "worst relative error %.3g", worst);
        o.detail = buf;
    }
    return o;
}

// 5. Planted topics: 3 clusters, no misassignment, top-5 terms are planted keywords.
Outcome planted_topics() {
    Outcome o;
    const auto data = rt::planted_topics(7);
    const PipelineConfig config;
    const auto run = run_clustering(data.corpus, config);
    o.require(run.assignment.n_clusters == 3, "found " + std::to_string(run.assignment.n_clusters) + " clusters");
    if (!o.ok) return o;

    std::map<int, std::map<int, std::size_t>> votes;
    for (std::size_t k = 0; k < data.corpus.size(); ++k) ++votes[run.assignment.labels[k]][data.topic[k]];
    std::size_t misassigned = run.assignment.noise_count();
    std::map<int, int> topic_of;
    std::set<int> used;
    for (int c = 0; c < 3; ++c) {
        const auto& v = votes[c];
        const auto best = std::max_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.second < b.second; });
        topic_of[c] = best->first;
        used.insert(best->first);
        for (const auto& [t, n] : v) misassigned += t == best->first ? 0 : n;
    }
    o.require(used.size() == 3, "two clusters share a topic");
    o.require(misassigned == 0, std::to_string(misassigned) + " misassigned documents");

    const auto table = cluster_relevance(run.pre.streams, run.assignment, config);
    for (int c = 0; c < 3 && o.ok; ++c) {
        const auto& kw = data.keywords[static_cast<std::size_t>(topic_of[c])];
        const auto top = rank_terms(table, static_cast<std::size_t>(c), 5);
        o.require(top.size() == 5, "cluster " + std::to_string(c) + " has fewer than 5 relevant terms");
        for (const auto& t : top) {
            o.require(std::find(kw.begin(), kw.end(), t.term) != kw.end(),
                      "cluster " + std::to_string(c) + " top-5 contains \"" + t.term + "\"");
        }
    }
    if (o.ok) o.detail = std::to_string(run.model.n_components()) + " components";
    return o;
}

// 6. Contrast of two periods with planted trending words.
Outcome contrast_mode() {
    Outcome o;
    const auto data = rt::two_period(2017);
    const auto corpus = split_by_period(data.corpus, data.boundary);
    const PipelineConfig config;
    const auto pre = preprocess(corpus, config);
    const auto table = contrast_relevance(corpus, pre.streams, build_vocabulary(pre.streams),
                                          std::string(kGroupAfter), std::string(kGroupBefore), config.epsilon);
    const auto a = rank_terms(table, table.cluster_index(std::string(kGroupBefore)), 10);
    const auto b = rank_terms(table, table.cluster_index(std::string(kGroupAfter)), 10);
    const auto has = [](const std::vector<RankedTerm>& r, const std::string& w) {
        return std::any_of(r.begin(), r.end(), [&](const RankedTerm& x) { return x.term == w; });
    };
    for (const auto& w : data.trending) {
        o.require(has(b, w), "\"" + w + "\" missing from the later period's top 10");
        o.require(!has(a, w), "\"" + w + "\" in the earlier period's top 10");
    }
    return o;
}

// 7. Formula exactness.
Outcome formula_exactness() {
    Outcome o;
    const Vocabulary v({"t"}, {2}, 4);
    o.require(std::abs(idf(v, 4)[0] - std::log(2.0)) <= 1e-12, "idf(4, 2) != ln 2");

    OccurrenceIndex idx;
    idx.cluster_names = {"0", "1", "2", "3"};
    idx.cluster_sizes = {10, 10, 10, 10};
    idx.terms = {"t"};
    idx.contained = {{5}, {2}, {0}, {1}};
    o.require(std::abs(fpr(idx, 0, 0) - (0.1 + std::sqrt(0.02 / 3.0))) <= 1e-12, "FPR({0.2, 0, 0.1})");

    const std::vector<double> a = {0.3, -1.7, 2.2, 0.05};
    const std::vector<double> neg = {-0.3, 1.7, -2.2, -0.05};
    const std::vector<double> e1 = {1, 0, 0, 0};
    const std::vector<double> e2 = {0, 3, 0, 0};
    o.require(cosine_distance(a, a) == 0.0, "identical != 0");
    o.require(cosine_distance(e1, e2) == 1.0, "orthogonal != 1");
    o.require(cosine_distance(a, neg) == 2.0, "opposite != 2");
    return o;
}

// 8. Two full runs produce byte-identical labels, relevance and SVG.
std::vector<std::string> full_run(const Corpus& corpus, const std::filesystem::path& root) {
    const PipelineConfig config;
    const RunDir dir{root};
    write_run(dir, corpus, config, run_clustering(corpus, config));
    const auto loaded = load_run(dir, corpus);
    const auto table = cluster_relevance(loaded.streams, loaded.assignment, loaded.config);
    write_relevance_csv(table, dir.relevance());
    std::vector<std::string> out = {read_file(dir.labels()), read_file(dir.relevance())};
    for (std::size_t c = 0; c < table.n_clusters(); ++c) {
        CloudLayoutOptions opts;
        opts.top_k = config.top_k;
        const auto path = root / ("cluster" + std::to_string(c) + ".svg");
        render_svg(layout_wordcloud(rank_terms(table, c, opts.top_k), opts), path);
        out.push_back(read_file(path));
    }
    return out;
}

Outcome determinism() {
    Outcome o;
    rt::TempDir tmp("relwords-acceptance");
    const auto corpus = rt::planted_topics(99).corpus;
    const auto a = full_run(corpus, tmp / "a");
    const auto b = full_run(corpus, tmp / "b");
    o.require(a.size() == b.size(), "different artifact counts");
    for (std::size_t i = 0; i < a.size() && o.ok; ++i) o.require(a[i] == b[i], "artifact " + std::to_string(i) + " differs");
    if (o.ok) o.detail = std::to_string(a.size()) + " artifacts compared";
    return o;
}

struct Criterion {
    const char* name;
    double max_seconds;
    std::function<Outcome()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 score fixed points", 1.0, score_fixed_points},
        {"2 relevance surface shape", 1.0, surface_shape},
        {"3 DBSCAN oracle equivalence", 30.0, dbscan_oracle},
        {"4 kernel PCA spectral reconstruction", 10.0, kpca_reconstruction},
        {"5 planted-topic recovery", 10.0, planted_topics},
        {"6 contrast mode", 5.0, contrast_mode},
        {"7 formula exactness", 1.0, formula_exactness},
        {"8 determinism", 0.0, determinism},
    };

    // Determinism may take up to twice a single pipeline run.
    double pipeline_seconds = 0.0;
    {
        const auto corpus = rt::planted_topics(99).corpus;
        const auto t0 = std::chrono::steady_clock::now();
        rt::TempDir tmp("relwords-acceptance");
        full_run(corpus, tmp / "timing");
        pipeline_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double limit = c.max_seconds > 0.0 ? c.max_seconds : 2.0 * pipeline_seconds + 0.05;
        if (o.ok && secs > limit) {
            o.ok = false;
            o.detail = "took longer than the limit";
        }
        failures += o.ok ? 0 : 1;
        std::printf("%s  %-40s %8.3fs (limit %.3fs)%s%s\n", o.ok ? "PASS" : "FAIL", c.name, secs, limit,
                    o.detail.empty() ? "" : "  ", o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
