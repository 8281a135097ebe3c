#pragma once

// Test-only helpers: temporary directories, synthetic corpora and reference
// implementations that the library code is checked against.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "relwords/clustering.hpp"
#include "relwords/corpus.hpp"
#include "relwords/features.hpp"

namespace relwords::testing {

class TempDir {
public:
    explicit TempDir(const std::string& prefix = "relwords-test") {
        static int counter = 0;
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                (prefix + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline Timestamp day(int y, unsigned m, unsigned d) {
    using namespace std::chrono;
    return sys_seconds{sys_days{year{y} / month{m} / d}};
}

// --- synthetic corpora -----------------------------------------------------

struct PlantedTopics {
    Corpus corpus;
    std::vector<int> topic;                          // per document
    std::vector<std::vector<std::string>> keywords;  // per topic
};

// Each topic owns `keywords_per_topic` exclusive keywords; every document
// carries `filler_per_doc` tokens drawn from a shared filler vocabulary plus
// `keywords_per_doc` of its topic's keywords (each repeated `keyword_repeat`
// times), shuffled.
inline PlantedTopics planted_topics(std::uint64_t seed, std::size_t n_topics = 3, std::size_t docs_per_topic = 15,
                                    std::size_t keywords_per_topic = 10, std::size_t filler_per_doc = 50,
                                    std::size_t filler_vocab = 50, std::size_t keywords_per_doc = 8,
                                    std::size_t keyword_repeat = 3) {
    std::mt19937_64 rng(seed);
    PlantedTopics out;
    std::vector<std::string> filler;
    for (std::size_t i = 0; i < filler_vocab; ++i) filler.push_back("filler" + std::to_string(i));
    for (std::size_t t = 0; t < n_topics; ++t) {
        std::vector<std::string> kw;
        for (std::size_t i = 0; i < keywords_per_topic; ++i) {
            kw.push_back("topic" + std::string(1, static_cast<char>('a' + t)) + "kw" + std::to_string(i));
        }
        out.keywords.push_back(kw);
    }
    std::uniform_int_distribution<std::size_t> pick_filler(0, filler_vocab - 1);
    // Interleave topics so document order carries no topic signal.
    for (std::size_t d = 0; d < docs_per_topic; ++d) {
        for (std::size_t t = 0; t < n_topics; ++t) {
            std::vector<std::string> tokens;
            for (std::size_t i = 0; i < filler_per_doc; ++i) tokens.push_back(filler[pick_filler(rng)]);
            auto kw = out.keywords[t];
            std::shuffle(kw.begin(), kw.end(), rng);
            for (std::size_t i = 0; i < std::min(keywords_per_doc, kw.size()); ++i) {
                for (std::size_t r = 0; r < keyword_repeat; ++r) tokens.push_back(kw[i]);
            }
            std::shuffle(tokens.begin(), tokens.end(), rng);
            std::string text;
            for (const auto& tok : tokens) text += (text.empty() ? "" : " ") + tok;
            out.corpus.docs.push_back({"t" + std::to_string(t) + "-d" + std::to_string(d), text, std::nullopt, std::nullopt});
            out.topic.push_back(static_cast<int>(t));
        }
    }
    out.corpus.provenance = "synthetic:planted_topics";
    return out;
}

struct TwoPeriod {
    Corpus corpus;
    Timestamp boundary;
    std::vector<std::string> trending;  // planted in the later period only
    std::vector<std::string> fading;    // planted in the earlier period only
};

// Earlier period: Jan 1-15 2017, later period: Jan 16-22 2017.
inline TwoPeriod two_period(std::uint64_t seed, std::size_t docs_per_period = 40) {
    std::mt19937_64 rng(seed);
    TwoPeriod out;
    out.boundary = day(2017, 1, 16);
    out.trending = {"inauguration", "protest", "march", "oath", "australianopen"};
    out.fading = {"christmas", "holiday", "newyear"};
    std::vector<std::string> filler;
    for (int i = 0; i < 80; ++i) filler.push_back("word" + std::to_string(i));
    std::uniform_int_distribution<std::size_t> pick(0, filler.size() - 1);
    std::bernoulli_distribution coin(0.6);

    for (int period = 0; period < 2; ++period) {
        for (std::size_t d = 0; d < docs_per_period; ++d) {
            std::vector<std::string> tokens;
            for (int i = 0; i < 30; ++i) tokens.push_back(filler[pick(rng)]);
            const auto& planted = period == 1 ? out.trending : out.fading;
            for (const auto& w : planted) {
                if (coin(rng)) tokens.push_back(w);
            }
            std::shuffle(tokens.begin(), tokens.end(), rng);
            std::string text;
            for (const auto& tok : tokens) text += (text.empty() ? "" : " ") + tok;
            const Timestamp ts = period == 1 ? day(2017, 1, 16 + static_cast<unsigned>(d % 7))
                                             : day(2017, 1, 1 + static_cast<unsigned>(d % 15));
            out.corpus.docs.push_back(
                {"p" + std::to_string(period) + "-" + std::to_string(d), text, ts + std::chrono::hours(9), std::nullopt});
        }
    }
    out.corpus.provenance = "synthetic:two_period";
    return out;
}

// --- reference DBSCAN ------------------------------------------------------

// Core points by definition, connected components of the core graph (edges at
// distance <= eps) via union-find, borders attached to the adjacent component
// whose smallest core index is lowest. Returns one label per point, -1 noise,
// components numbered by smallest core index.
inline std::vector<int> reference_dbscan(const DistanceMatrix& dist, double eps, std::size_t min_pts) {
    const std::size_t n = dist.size();
    std::vector<bool> core(n, false);
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t count = 0;
        for (std::size_t q = 0; q < n; ++q) count += dist(p, q) <= eps ? 1 : 0;
        core[p] = count >= min_pts;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (core[p] && core[q] && dist(p, q) <= eps) {
                const auto a = find(p);
                const auto b = find(q);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    // Roots are the smallest index of each component after min-linking; map to labels by root order.
    std::map<std::size_t, int> component_label;
    for (std::size_t p = 0; p < n; ++p) {
        if (core[p]) component_label.emplace(find(p), 0);
    }
    int next = 0;
    for (auto& [root, label] : component_label) label = next++;

    std::vector<int> labels(n, -1);
    for (std::size_t p = 0; p < n; ++p) {
        if (core[p]) {
            labels[p] = component_label[find(p)];
            continue;
        }
        int best = -1;
        for (std::size_t q = 0; q < n; ++q) {
            if (core[q] && dist(p, q) <= eps) {
                const int l = component_label[find(q)];
                if (best == -1 || l < best) best = l;
            }
        }
        labels[p] = best;
    }
    return labels;
}

// True when the two labelings induce the same partition and noise set.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> ab;
    std::map<int, int> ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == -1) != (b[i] == -1)) return false;
        if (a[i] == -1) continue;
        const auto [it1, fresh1] = ab.emplace(a[i], b[i]);
        const auto [it2, fresh2] = ba.emplace(b[i], a[i]);
        if (it1->second != b[i] || it2->second != a[i]) return false;
    }
    return true;
}

// Random distance matrices: either cosine distances of clustered 3-D points
// (structured) or i.i.d. uniform entries in [0, 2] (unstructured).
inline DistanceMatrix random_distance_matrix(std::mt19937_64& rng, std::size_t n, bool structured) {
    DistanceMatrix dist(n);
    if (!structured) {
        std::uniform_real_distribution<double> u(0.0, 2.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) dist.set(a, b, u(rng));
        }
        return dist;
    }
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> n_centers(1, 6);
    std::vector<std::array<double, 3>> centers(static_cast<std::size_t>(n_centers(rng)));
    for (auto& c : centers) c = {g(rng), g(rng), g(rng)};
    std::uniform_real_distribution<double> spread(0.05, 0.8);
    const double s = spread(rng);
    std::vector<std::array<double, 3>> pts(n);
    std::uniform_int_distribution<std::size_t> which(0, centers.size() - 1);
    for (auto& p : pts) {
        const auto& c = centers[which(rng)];
        p = {c[0] + s * g(rng), c[1] + s * g(rng), c[2] + s * g(rng)};
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double ab = 0, aa = 0, bb = 0;
            for (int i = 0; i < 3; ++i) {
                ab += pts[a][i] * pts[b][i];
                aa += pts[a][i] * pts[a][i];
                bb += pts[b][i] * pts[b][i];
            }
            dist.set(a, b, 1.0 - ab / std::sqrt(aa * bb));
        }
    }
    return dist;
}

// Random sparse tf-idf-like matrix with `n` rows over `t` terms.
inline FeatureMatrix random_feature_matrix(std::mt19937_64& rng, std::size_t n, std::size_t t, double density = 0.1) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FeatureMatrix m;
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < t; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "t%05zu", i);
        terms.push_back(buf);
    }
    m.vocab = Vocabulary(terms, std::vector<std::size_t>(t, 1), n);
    for (std::size_t k = 0; k < n; ++k) {
        SparseRow row;
        for (TermId i = 0; i < t; ++i) {
            if (u(rng) < density) row.emplace_back(i, u(rng));
        }
        if (row.empty()) row.emplace_back(static_cast<TermId>(k % t), 0.5);
        m.doc_ids.push_back("d" + std::to_string(k));
        m.rows.push_back(std::move(row));
    }
    m.idf.assign(t, 1.0);
    return m;
}

}  // namespace relwords::testing
