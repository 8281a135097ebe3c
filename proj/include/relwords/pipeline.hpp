#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relwords/clustering.hpp"
#include "relwords/corpus.hpp"
#include "relwords/embedding.hpp"
#include "relwords/features.hpp"
#include "relwords/relevance.hpp"
#include "relwords/text.hpp"

namespace relwords {

struct PipelineConfig {
    std::size_t min_df = 1;
    std::size_t bigram_discount = kDefaultBigramDiscount;
    std::uint64_t bigram_seed = 42;
    std::size_t kpca_components = kDefaultComponents;
    double eps = kDefaultEps;
    std::size_t min_pts = kDefaultMinPts;
    double epsilon = kDefaultEpsilon;
    std::size_t top_k = 50;

    // Throws on eps outside (0, 2), min_pts < 1, kpca_components < 1, epsilon <= 0.
    void validate() const;

    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j);
};

// Tokenized corpus with the distinctive bigrams merged.
struct Preprocessed {
    std::vector<TokenStream> streams;
    std::vector<BigramCandidate> candidates;
    BigramSelection bigrams;
};

Preprocessed preprocess(const Corpus& corpus, const PipelineConfig& config);

struct ClusterRun {
    Preprocessed pre;
    FeatureMatrix matrix;
    KpcaModel model;
    Embedding embedding;
    ClusterAssignment assignment;
};

// tokenize -> bigrams -> tf-idf -> kernel PCA -> cosine DBSCAN.
ClusterRun run_clustering(const Corpus& corpus, const PipelineConfig& config);

RelevanceTable cluster_relevance(const std::vector<TokenStream>& streams, const ClusterAssignment& assignment,
                                 const PipelineConfig& config);

// On-disk layout of a clustering run.
//   manifest.json  config, corpus hash, summary
//   labels.csv     doc_id,label
//   tokens.jsonl   {"id": ..., "tokens": [...]} after bigram merging
//   bigrams.csv    selected bigrams
//   relevance.csv  written by the relevant stage
struct RunDir {
    std::filesystem::path root;

    std::filesystem::path manifest() const { return root / "manifest.json"; }
    std::filesystem::path labels() const { return root / "labels.csv"; }
    std::filesystem::path tokens() const { return root / "tokens.jsonl"; }
    std::filesystem::path bigrams() const { return root / "bigrams.csv"; }
    std::filesystem::path relevance() const { return root / "relevance.csv"; }
};

nlohmann::json make_manifest(const Corpus& corpus, const PipelineConfig& config, const ClusterRun& run);

void write_run(const RunDir& dir, const Corpus& corpus, const PipelineConfig& config, const ClusterRun& run);

void write_token_streams(const std::vector<TokenStream>& streams, const std::filesystem::path& path);
std::vector<TokenStream> read_token_streams(const std::filesystem::path& path);

// Artifacts of a finished clustering run, checked against the corpus.
struct LoadedRun {
    PipelineConfig config;
    nlohmann::json manifest;
    std::vector<TokenStream> streams;
    ClusterAssignment assignment;
};

// Throws "stale artifacts; rerun cluster" when the corpus hash or document ids
// do not match what the run was produced from.
LoadedRun load_run(const RunDir& dir, const Corpus& corpus);

}  // namespace relwords
