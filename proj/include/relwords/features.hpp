#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relwords/text.hpp"

namespace relwords {

using TermId = std::uint32_t;

// Terms in lexicographic order; index(term) is the column in the feature matrix.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t n_docs);

    std::size_t size() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::string& term(TermId i) const { return terms_.at(i); }
    const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
    std::optional<TermId> index(std::string_view term) const;

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> doc_freq_;
    std::unordered_map<std::string, TermId> index_;
    std::size_t n_docs_ = 0;
};

// Sparse row: (term, weight) sorted by term id, weights nonzero.
using SparseRow = std::vector<std::pair<TermId, double>>;

struct FeatureMatrix {
    std::vector<std::string> doc_ids;
    std::vector<SparseRow> rows;
    Vocabulary vocab;
    std::vector<double> idf;
    // Documents whose vector came out all-zero (every token out of vocabulary, or empty).
    std::vector<std::string> zero_rows;

    std::size_t n_docs() const { return rows.size(); }
    std::size_t n_terms() const { return vocab.size(); }
};

Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, std::size_t min_df = 1);

// ln(N / doc_freq) per term.
std::vector<double> idf(const Vocabulary& vocab, std::size_t n_docs);

// x_ki = (count of term i in doc k / token count of doc k) * idf(i).
// Out-of-vocabulary tokens still count toward the document length.
FeatureMatrix vectorize(const std::vector<TokenStream>& streams, const Vocabulary& vocab);

double dot(const SparseRow& a, const SparseRow& b);

// Sparse triplets: doc_id,term,weight.
void write_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);

}  // namespace relwords
