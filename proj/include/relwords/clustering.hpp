#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "relwords/embedding.hpp"

namespace relwords {

inline constexpr int kNoise = -1;
inline constexpr double kDefaultEps = 0.45;
inline constexpr std::size_t kDefaultMinPts = 3;
// Vectors with a smaller norm are treated as maximally dissimilar (distance 1).
inline constexpr double kZeroNorm = 1e-12;

// Dense symmetric N x N matrix with zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t a, std::size_t b) const { return d_[a * n_ + b]; }
    // Sets both (a, b) and (b, a).
    void set(std::size_t a, std::size_t b, double v) {
        d_[a * n_ + b] = v;
        d_[b * n_ + a] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

struct ClusterAssignment {
    std::vector<int> labels;  // kNoise or 0..n_clusters-1
    std::size_t n_clusters = 0;

    std::size_t noise_count() const;
    std::vector<std::size_t> cluster_sizes() const;
};

double cosine_distance(std::span<const double> a, std::span<const double> b);

DistanceMatrix pairwise_distances(const Embedding& embedding);

// Density-based clustering over a precomputed distance matrix. A point is core
// when at least `min_pts` points (itself included) lie within `eps`. Points are
// seeded in index order, so cluster ids follow discovery order and a border
// point reachable from several clusters joins the first one to reach it.
ClusterAssignment dbscan(const DistanceMatrix& dist, double eps = kDefaultEps,
                         std::size_t min_pts = kDefaultMinPts);

// CSV doc_id,label with noise as -1.
void write_assignment_csv(const std::vector<std::string>& doc_ids, const ClusterAssignment& assignment,
                          const std::filesystem::path& path);
ClusterAssignment read_assignment_csv(const std::filesystem::path& path, std::vector<std::string>* doc_ids);

}  // namespace relwords
