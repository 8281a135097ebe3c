#include "relwords/text.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

namespace {

bool is_token_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

// Corpus-wide unigram and adjacent-pair counts over interned term ids.
// Ids follow lexicographic term order.
struct CorpusCounts {
    std::vector<std::string> terms;
    std::vector<std::size_t> unigram;
    std::unordered_map<std::uint64_t, std::size_t> pairs;
    std::size_t total_tokens = 0;

    explicit CorpusCounts(const std::vector<TokenStream>& corpus) {
        std::unordered_map<std::string_view, std::uint32_t> ids;
        for (const auto& s : corpus) {
            for (const auto& t : s.tokens) ids.emplace(t, 0);
        }
        terms.reserve(ids.size());
        for (const auto& [t, _] : ids) terms.emplace_back(t);
        std::sort(terms.begin(), terms.end());
        for (std::uint32_t i = 0; i < terms.size(); ++i) ids[terms[i]] = i;

        unigram.assign(terms.size(), 0);
        for (const auto& s : corpus) {
            for (std::size_t k = 0; k < s.tokens.size(); ++k) {
                const auto id = ids.at(s.tokens[k]);
                ++unigram[id];
                if (k + 1 < s.tokens.size()) ++pairs[pair_key(id, ids.at(s.tokens[k + 1]))];
            }
            total_tokens += s.tokens.size();
        }
    }

    std::size_t pair_count(std::uint32_t a, std::uint32_t b) const {
        const auto it = pairs.find(pair_key(a, b));
        return it == pairs.end() ? 0 : it->second;
    }

    double score(std::uint32_t a, std::uint32_t b, std::size_t discount) const {
        const double joint = static_cast<double>(pair_count(a, b));
        return (joint - static_cast<double>(discount)) * static_cast<double>(total_tokens) /
               (static_cast<double>(unigram[a]) * static_cast<double>(unigram[b]));
    }
};

}  // namespace

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
    std::vector<TokenSpan> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_token_char(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        TokenSpan span;
        span.begin = i;
        while (i < text.size() && is_token_char(static_cast<unsigned char>(text[i]))) {
            span.term += lower(static_cast<unsigned char>(text[i]));
            ++i;
        }
        span.end = i;
        out.push_back(std::move(span));
    }
    return out;
}

TokenStream normalize_tokenize(std::string_view text, std::string doc_id) {
    TokenStream s;
    s.doc_id = std::move(doc_id);
    for (auto& span : tokenize_spans(text)) s.tokens.push_back(std::move(span.term));
    return s;
}

std::vector<BigramCandidate> score_bigrams(const std::vector<TokenStream>& corpus, std::size_t discount) {
    if (corpus.empty()) throw Error("score_bigrams: empty corpus");
    const CorpusCounts counts(corpus);

    std::vector<std::uint64_t> keys;
    for (const auto& [key, n] : counts.pairs) {
        if (n > discount) keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());

    std::vector<BigramCandidate> out;
    out.reserve(keys.size());
    for (const auto key : keys) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        out.push_back({counts.terms[a], counts.terms[b], counts.pair_count(a, b), counts.score(a, b, discount)});
    }
    return out;
}

BigramSelection select_bigrams(const std::vector<BigramCandidate>& candidates,
                               const std::vector<TokenStream>& corpus, std::size_t n_random,
                               std::uint64_t seed) {
    BigramSelection sel;
    if (candidates.empty() || corpus.empty()) return sel;
    const CorpusCounts counts(corpus);
    const std::size_t v = counts.terms.size();
    if (v < 2) return sel;

    if (n_random == 0) n_random = std::max(10 * candidates.size(), kMinRandomPairs);

    // Welford accumulation keeps the baseline stable for large samples.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    auto add = [&](double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    };

    if (v * v <= n_random) {
        for (std::uint32_t a = 0; a < v; ++a) {
            for (std::uint32_t b = 0; b < v; ++b) add(counts.score(a, b, 0));
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(v - 1));
        for (std::size_t i = 0; i < n_random; ++i) {
            const auto a = pick(rng);
            const auto b = pick(rng);
            add(counts.score(a, b, 0));
        }
    }

    sel.n_random = n;
    sel.baseline_mean = mean;
    sel.baseline_std = std::sqrt(m2 / static_cast<double>(n));
    sel.threshold = sel.baseline_mean + 2.0 * sel.baseline_std;
    for (const auto& c : candidates) {
        if (c.score > sel.threshold) sel.selected.emplace(c.first, c.second);
    }
    return sel;
}

TokenStream apply_bigrams(const TokenStream& stream, const BigramSet& selected) {
    TokenStream out;
    out.doc_id = stream.doc_id;
    const auto& t = stream.tokens;
    out.tokens.reserve(t.size());
    Bigram probe;
    for (std::size_t i = 0; i < t.size();) {
        if (i + 1 < t.size() && !selected.empty()) {
            probe.first = t[i];
            probe.second = t[i + 1];
            if (selected.count(probe)) {
                out.tokens.push_back(t[i] + kBigramJoiner + t[i + 1]);
                i += 2;
                continue;
            }
        }
        out.tokens.push_back(t[i]);
        ++i;
    }
    return out;
}

void write_bigrams_csv(const std::vector<BigramCandidate>& candidates, const BigramSet& selected,
                       const std::filesystem::path& path) {
    std::string out = "first,second,score\n";
    for (const auto& c : candidates) {
        if (!selected.count({c.first, c.second})) continue;
        out += csv_field(c.first) + ',' + csv_field(c.second) + ',' + format_double(c.score) + '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace relwords
