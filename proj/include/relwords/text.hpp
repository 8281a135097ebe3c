#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relwords {

struct TokenStream {
    std::string doc_id;
    std::vector<std::string> tokens;

    bool operator==(const TokenStream&) const = default;
};

// A token together with its byte range [begin, end) in the source text.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string term;
};

struct BigramCandidate {
    std::string first;
    std::string second;
    std::size_t joint_count = 0;
    double score = 0.0;
};

using Bigram = std::pair<std::string, std::string>;
using BigramSet = std::set<Bigram>;

inline constexpr char kBigramJoiner = '_';
inline constexpr std::size_t kDefaultBigramDiscount = 5;
// Lower bound on the random baseline sample, see select_bigrams.
inline constexpr std::size_t kMinRandomPairs = 1000;

// Lowercases ASCII letters; every byte that is not [A-Za-z0-9] separates tokens.
std::vector<TokenSpan> tokenize_spans(std::string_view text);
TokenStream normalize_tokenize(std::string_view text, std::string doc_id = {});

// Discounted collocation score over corpus-wide counts:
//   (count(a b) - discount) * W / (count(a) * count(b)),  W = total tokens.
// Pairs seen at most `discount` times are omitted. Sorted by (first, second).
std::vector<BigramCandidate> score_bigrams(const std::vector<TokenStream>& corpus,
                                           std::size_t discount = kDefaultBigramDiscount);

struct BigramSelection {
    BigramSet selected;
    double threshold = 0.0;
    double baseline_mean = 0.0;
    double baseline_std = 0.0;
    std::size_t n_random = 0;
};

// Keeps the candidates scoring above mean + 2 std of the undiscounted score
// of random term pairs. `n_random == 0` means max(10 * |candidates|,
// kMinRandomPairs). When the ordered term-pair space holds no more than
// `n_random` pairs it is enumerated instead of sampled.
BigramSelection select_bigrams(const std::vector<BigramCandidate>& candidates,
                               const std::vector<TokenStream>& corpus, std::size_t n_random,
                               std::uint64_t seed);

// Greedy left-to-right merge of selected adjacent pairs into "first_second".
TokenStream apply_bigrams(const TokenStream& stream, const BigramSet& selected);

// Debug dump: first,second,score.
void write_bigrams_csv(const std::vector<BigramCandidate>& candidates, const BigramSet& selected,
                       const std::filesystem::path& path);

}  // namespace relwords
