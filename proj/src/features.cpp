#include "relwords/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t n_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs) {
    if (terms_.size() != doc_freq_.size()) throw Error("vocabulary: terms/doc_freq size mismatch");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0 && !(terms_[i - 1] < terms_[i])) throw Error("vocabulary terms must be sorted and unique");
        if (doc_freq_[i] < 1 || doc_freq_[i] > n_docs_) {
            throw Error("vocabulary: doc_freq of \"" + terms_[i] + "\" out of range");
        }
        index_.emplace(terms_[i], static_cast<TermId>(i));
    }
}

std::optional<TermId> Vocabulary::index(std::string_view term) const {
    const auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, std::size_t min_df) {
    if (streams.empty()) throw Error("build_vocabulary: no documents");
    std::map<std::string, std::size_t> df;
    for (const auto& s : streams) {
        std::unordered_set<std::string_view> seen(s.tokens.begin(), s.tokens.end());
        for (const auto t : seen) ++df[std::string(t)];
    }
    std::vector<std::string> terms;
    std::vector<std::size_t> freq;
    for (auto& [term, n] : df) {
        if (n >= min_df) {
            terms.push_back(term);
            freq.push_back(n);
        }
    }
    if (terms.empty()) throw Error("empty vocabulary (min_df = " + std::to_string(min_df) + ")");
    return Vocabulary(std::move(terms), std::move(freq), streams.size());
}

std::vector<double> idf(const Vocabulary& vocab, std::size_t n_docs) {
    std::vector<double> out(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto df = vocab.doc_freq()[i];
        if (df == 0) throw Error("idf: term \"" + vocab.term(static_cast<TermId>(i)) + "\" has zero doc_freq");
        out[i] = std::log(static_cast<double>(n_docs) / static_cast<double>(df));
    }
    return out;
}

FeatureMatrix vectorize(const std::vector<TokenStream>& streams, const Vocabulary& vocab) {
    FeatureMatrix m;
    m.vocab = vocab;
    m.idf = idf(vocab, vocab.n_docs());
    m.rows.reserve(streams.size());
    m.doc_ids.reserve(streams.size());

    std::map<TermId, std::size_t> counts;
    for (const auto& s : streams) {
        counts.clear();
        for (const auto& t : s.tokens) {
            if (const auto id = vocab.index(t)) ++counts[*id];
        }
        SparseRow row;
        const double len = static_cast<double>(s.tokens.size());
        for (const auto [id, n] : counts) {
            const double w = static_cast<double>(n) / len * m.idf[id];
            if (w != 0.0) row.emplace_back(id, w);
        }
        if (row.empty()) m.zero_rows.push_back(s.doc_id);
        m.doc_ids.push_back(s.doc_id);
        m.rows.push_back(std::move(row));
    }
    return m;
}

double dot(const SparseRow& a, const SparseRow& b) {
    double sum = 0.0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            sum += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return sum;
}

void write_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path) {
    std::string out = "doc_id,term,weight\n";
    for (std::size_t k = 0; k < matrix.n_docs(); ++k) {
        for (const auto& [id, w] : matrix.rows[k]) {
            out += csv_field(matrix.doc_ids[k]) + ',' + csv_field(matrix.vocab.term(id)) + ',' + format_double(w) + '\n';
        }
    }
    write_file_atomic(path, out);
}

}  // namespace relwords
