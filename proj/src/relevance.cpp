#include "relwords/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "relwords/clustering.hpp"
#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

namespace {

void count_presence(OccurrenceIndex& index, const TokenStream& stream, const Vocabulary& vocab, std::size_t c) {
    std::unordered_set<TermId> present;
    for (const auto& t : stream.tokens) {
        if (const auto id = vocab.index(t)) present.insert(*id);
    }
    for (const auto id : present) ++index.contained[c][id];
    ++index.cluster_sizes[c];
}

OccurrenceIndex empty_index(const Vocabulary& vocab, std::vector<std::string> names) {
    OccurrenceIndex index;
    index.cluster_names = std::move(names);
    index.terms = vocab.terms();
    index.cluster_sizes.assign(index.cluster_names.size(), 0);
    index.contained.assign(index.cluster_names.size(), std::vector<std::size_t>(vocab.size(), 0));
    return index;
}

std::vector<std::size_t> ranked_order(const RelevanceTable& table, std::size_t c) {
    const auto& row = table.scores[c];
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row[a].r != row[b].r) return row[a].r > row[b].r;
        if (row[a].tpr != row[b].tpr) return row[a].tpr > row[b].tpr;
        return table.terms[a] < table.terms[b];
    });
    return order;
}

}  // namespace

std::size_t RelevanceTable::cluster_index(const std::string& name) const {
    const auto it = std::find(cluster_names.begin(), cluster_names.end(), name);
    if (it == cluster_names.end()) throw Error("unknown cluster \"" + name + "\"");
    return static_cast<std::size_t>(it - cluster_names.begin());
}

OccurrenceIndex build_occurrence_index(const std::vector<TokenStream>& streams, const Vocabulary& vocab,
                                       const std::vector<int>& labels, std::size_t n_clusters) {
    if (streams.size() != labels.size()) throw Error("occurrence index: labels do not match documents");
    std::vector<std::string> names;
    for (std::size_t c = 0; c < n_clusters; ++c) names.push_back(std::to_string(c));
    OccurrenceIndex index = empty_index(vocab, std::move(names));
    for (std::size_t k = 0; k < streams.size(); ++k) {
        if (labels[k] == kNoise) continue;
        if (labels[k] < 0 || static_cast<std::size_t>(labels[k]) >= n_clusters) {
            throw Error("occurrence index: label " + std::to_string(labels[k]) + " out of range");
        }
        count_presence(index, streams[k], vocab, static_cast<std::size_t>(labels[k]));
    }
    return index;
}

double tpr(const OccurrenceIndex& index, std::size_t c, std::size_t t) {
    const auto size = index.cluster_sizes.at(c);
    if (size == 0) throw Error("cluster \"" + index.cluster_names[c] + "\" is empty");
    return static_cast<double>(index.contained[c].at(t)) / static_cast<double>(size);
}

double fpr_raw(const OccurrenceIndex& index, std::size_t c, std::size_t t) {
    const std::size_t others = index.n_clusters() - 1;
    if (others == 0) return 0.0;
    double mean = 0.0;
    for (std::size_t l = 0; l < index.n_clusters(); ++l) {
        if (l != c) mean += tpr(index, l, t);
    }
    mean /= static_cast<double>(others);
    double var = 0.0;
    for (std::size_t l = 0; l < index.n_clusters(); ++l) {
        if (l == c) continue;
        const double d = tpr(index, l, t) - mean;
        var += d * d;
    }
    var /= static_cast<double>(others);
    return mean + std::sqrt(var);
}

double fpr(const OccurrenceIndex& index, std::size_t c, std::size_t t) {
    return std::min(fpr_raw(index, c, t), 1.0);
}

double score_diff(double tpr, double fpr) { return std::max(tpr - fpr, 0.0); }

double score_quot(double tpr, double fpr, double epsilon) {
    const double z = tpr / std::max(fpr, epsilon);
    return (std::min(std::max(z, 1.0), 4.0) - 1.0) / 3.0;
}

double score_final(double tpr, double fpr, double epsilon) {
    return 0.5 * (score_diff(tpr, fpr) + score_quot(tpr, fpr, epsilon));
}

RelevanceTable compute_relevance(const OccurrenceIndex& index, double epsilon) {
    if (!(epsilon > 0.0)) throw Error("relevance: epsilon must be positive");
    if (index.n_clusters() == 0) throw Error("relevance: no clusters");
    RelevanceTable table;
    table.cluster_names = index.cluster_names;
    table.terms = index.terms;
    if (index.n_clusters() == 1) {
        table.warnings.push_back("only one cluster: FPR is 0 and scores reduce to occurrence rates");
    }
    table.scores.resize(index.n_clusters());
    for (std::size_t c = 0; c < index.n_clusters(); ++c) {
        auto& row = table.scores[c];
        row.resize(index.n_terms());
        for (std::size_t t = 0; t < index.n_terms(); ++t) {
            const double tp = tpr(index, c, t);
            const double fp = fpr_raw(index, c, t);
            auto& s = row[t];
            s.tpr = tp;
            s.fpr = std::min(fp, 1.0);
            s.r_diff = score_diff(tp, fp);
            s.r_quot = score_quot(tp, fp, epsilon);
            s.r = 0.5 * (s.r_diff + s.r_quot);
        }
    }
    return table;
}

std::vector<RankedTerm> rank_terms(const RelevanceTable& table, std::size_t c, std::size_t k) {
    if (c >= table.n_clusters()) throw Error("rank_terms: cluster " + std::to_string(c) + " out of range");
    std::vector<RankedTerm> out;
    for (const auto t : ranked_order(table, c)) {
        if (out.size() >= k) break;
        const auto& s = table.scores[c][t];
        if (!(s.r > 0.0)) break;
        out.push_back({table.terms[t], s.r, s.tpr});
    }
    return out;
}

RelevanceTable contrast_relevance(const Corpus& corpus, const std::vector<TokenStream>& streams,
                                  const Vocabulary& vocab, const std::string& group_a,
                                  const std::string& group_b, double epsilon) {
    if (corpus.size() != streams.size()) throw Error("contrast: token streams do not match corpus");
    if (group_a == group_b) throw Error("contrast: the two groups must differ");
    OccurrenceIndex index = empty_index(vocab, {group_a, group_b});
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const auto& g = corpus.docs[k].group;
        if (!g) throw Error("contrast: document \"" + corpus.docs[k].id + "\" has no group");
        if (*g == group_a) {
            count_presence(index, streams[k], vocab, 0);
        } else if (*g == group_b) {
            count_presence(index, streams[k], vocab, 1);
        } else {
            throw Error("contrast: document \"" + corpus.docs[k].id + "\" has unexpected group \"" + *g + "\"");
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        if (index.cluster_sizes[c] == 0) throw Error("contrast: group \"" + index.cluster_names[c] + "\" is empty");
    }
    return compute_relevance(index, epsilon);
}

void write_relevance_csv(const RelevanceTable& table, const std::filesystem::path& path) {
    std::string out = "cluster,term,tpr,fpr,r_diff,r_quot,r\n";
    for (std::size_t c = 0; c < table.n_clusters(); ++c) {
        for (const auto t : ranked_order(table, c)) {
            const auto& s = table.scores[c][t];
            if (!(s.tpr > 0.0)) continue;
            out += csv_field(table.cluster_names[c]) + ',' + csv_field(table.terms[t]) + ',' + format_double(s.tpr) +
                   ',' + format_double(s.fpr) + ',' + format_double(s.r_diff) + ',' + format_double(s.r_quot) + ',' +
                   format_double(s.r) + '\n';
        }
    }
    write_file_atomic(path, out);
}

}  // namespace relwords
