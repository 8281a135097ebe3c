#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "relwords/corpus.hpp"
#include "relwords/features.hpp"
#include "relwords/text.hpp"

namespace relwords {

inline constexpr double kDefaultEpsilon = 1e-8;

// Per cluster: number of documents, and for every vocabulary term the number
// of those documents that contain it. Noise documents are not indexed.
struct OccurrenceIndex {
    std::vector<std::string> cluster_names;
    std::vector<std::size_t> cluster_sizes;
    std::vector<std::string> terms;
    std::vector<std::vector<std::size_t>> contained;  // [cluster][term]

    std::size_t n_clusters() const { return cluster_names.size(); }
    std::size_t n_terms() const { return terms.size(); }
};

// `labels[k]` is kNoise or a cluster id in [0, n_clusters). Cluster names are the ids.
OccurrenceIndex build_occurrence_index(const std::vector<TokenStream>& streams, const Vocabulary& vocab,
                                       const std::vector<int>& labels, std::size_t n_clusters);

struct RelevanceScores {
    double tpr = 0.0;
    double fpr = 0.0;  // clamped to [0, 1]
    double r_diff = 0.0;
    double r_quot = 0.0;
    double r = 0.0;
};

struct RelevanceTable {
    std::vector<std::string> cluster_names;
    std::vector<std::string> terms;
    std::vector<std::vector<RelevanceScores>> scores;  // [cluster][term]
    std::vector<std::string> warnings;

    std::size_t n_clusters() const { return cluster_names.size(); }
    std::size_t cluster_index(const std::string& name) const;
};

// Fraction of cluster c's documents containing term t.
double tpr(const OccurrenceIndex& index, std::size_t c, std::size_t t);

// Mean plus population standard deviation of the term's TPR over every other
// cluster. Unclamped: can exceed 1. Zero when c is the only cluster.
double fpr_raw(const OccurrenceIndex& index, std::size_t c, std::size_t t);
double fpr(const OccurrenceIndex& index, std::size_t c, std::size_t t);

double score_diff(double tpr, double fpr);
double score_quot(double tpr, double fpr, double epsilon = kDefaultEpsilon);
double score_final(double tpr, double fpr, double epsilon = kDefaultEpsilon);

RelevanceTable compute_relevance(const OccurrenceIndex& index, double epsilon = kDefaultEpsilon);

struct RankedTerm {
    std::string term;
    double r = 0.0;
    double tpr = 0.0;
};

// Top k terms with r > 0; ties by higher TPR, then term.
std::vector<RankedTerm> rank_terms(const RelevanceTable& table, std::size_t c, std::size_t k);

// Relevance of two manual groups (the `group` field of each document) against
// each other. Cluster 0 is `group_a`, cluster 1 is `group_b`.
RelevanceTable contrast_relevance(const Corpus& corpus, const std::vector<TokenStream>& streams,
                                  const Vocabulary& vocab, const std::string& group_a,
                                  const std::string& group_b, double epsilon = kDefaultEpsilon);

// cluster,term,tpr,fpr,r_diff,r_quot,r for every term with tpr > 0, by cluster
// then rank order.
void write_relevance_csv(const RelevanceTable& table, const std::filesystem::path& path);

}  // namespace relwords
