#include "relwords/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

std::size_t ClusterAssignment::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(n_clusters, 0);
    for (const int l : labels) {
        if (l != kNoise) ++sizes[static_cast<std::size_t>(l)];
    }
    return sizes;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("cosine_distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    }
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (std::sqrt(aa) < kZeroNorm || std::sqrt(bb) < kZeroNorm) return 1.0;
    // sqrt(aa * bb) rather than sqrt(aa) * sqrt(bb): exact for a == b and a == -b.
    const double cos = std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
    return 1.0 - cos;
}

DistanceMatrix pairwise_distances(const Embedding& embedding) {
    const std::size_t n = embedding.rows();
    if (n < 2) throw Error("pairwise_distances needs at least 2 documents");
    // Row-major copy so each row is a contiguous span.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = embedding.coords;
    const auto d = static_cast<std::size_t>(rows.cols());
    DistanceMatrix dist(n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::span<const double> ra(rows.data() + a * d, d);
        for (std::size_t b = a + 1; b < n; ++b) {
            dist.set(a, b, cosine_distance(ra, std::span<const double>(rows.data() + b * d, d)));
        }
    }
    return dist;
}

ClusterAssignment dbscan(const DistanceMatrix& dist, double eps, std::size_t min_pts) {
    if (!(eps > 0.0)) throw Error("dbscan: eps must be positive");
    if (min_pts < 1) throw Error("dbscan: min_pts must be at least 1");
    const std::size_t n = dist.size();

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (dist(p, q) <= eps) neighbors[p].push_back(q);
        }
    }
    auto is_core = [&](std::size_t p) { return neighbors[p].size() >= min_pts; };

    constexpr int kUnassigned = -2;
    ClusterAssignment out;
    out.labels.assign(n, kUnassigned);
    std::deque<std::size_t> frontier;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (out.labels[seed] != kUnassigned || !is_core(seed)) continue;
        const int id = static_cast<int>(out.n_clusters++);
        out.labels[seed] = id;
        frontier.push_back(seed);
        while (!frontier.empty()) {
            const std::size_t p = frontier.front();
            frontier.pop_front();
            for (const std::size_t q : neighbors[p]) {
                if (out.labels[q] != kUnassigned) continue;
                out.labels[q] = id;
                if (is_core(q)) frontier.push_back(q);
            }
        }
    }
    std::replace(out.labels.begin(), out.labels.end(), kUnassigned, kNoise);
    return out;
}

void write_assignment_csv(const std::vector<std::string>& doc_ids, const ClusterAssignment& assignment,
                          const std::filesystem::path& path) {
    if (doc_ids.size() != assignment.labels.size()) throw Error("assignment/doc id count mismatch");
    std::string out = "doc_id,label\n";
    for (std::size_t k = 0; k < doc_ids.size(); ++k) {
        out += csv_field(doc_ids[k]) + ',' + std::to_string(assignment.labels[k]) + '\n';
    }
    write_file_atomic(path, out);
}

ClusterAssignment read_assignment_csv(const std::filesystem::path& path, std::vector<std::string>* doc_ids) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "doc_id,label") throw Error(path.string() + ": not a labels file");
    ClusterAssignment out;
    int max_label = kNoise;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw Error(path.string() + ": line " + std::to_string(line_no) + ": malformed");
        std::string id = line.substr(0, comma);
        if (id.size() >= 2 && id.front() == '"' && id.back() == '"') {
            std::string unq;
            for (std::size_t i = 1; i + 1 < id.size(); ++i) {
                if (id[i] == '"' && i + 2 < id.size() && id[i + 1] == '"') ++i;
                unq += id[i];
            }
            id = std::move(unq);
        }
        int label = 0;
        try {
            label = std::stoi(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw Error(path.string() + ": line " + std::to_string(line_no) + ": bad label");
        }
        if (label < kNoise) throw Error(path.string() + ": line " + std::to_string(line_no) + ": bad label");
        max_label = std::max(max_label, label);
        out.labels.push_back(label);
        if (doc_ids) doc_ids->push_back(std::move(id));
    }
    out.n_clusters = static_cast<std::size_t>(max_label + 1);
    return out;
}

}  // namespace relwords
