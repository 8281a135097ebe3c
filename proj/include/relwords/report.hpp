#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "relwords/corpus.hpp"
#include "relwords/relevance.hpp"
#include "relwords/text.hpp"

namespace relwords {

struct Canvas {
    double width = 800.0;
    double height = 600.0;
};

struct CloudLayoutOptions {
    std::size_t top_k = 50;
    Canvas canvas;
    double min_font = 10.0;
    double max_font = 48.0;
    // Bounding-box width per character, as a fraction of the font size.
    double char_advance = 0.6;
    double spiral_step = 0.05;   // radians
    double spiral_growth = 2.0;  // pixels of radius per radian
};

struct CloudEntry {
    std::string term;
    double weight = 0.0;
    double font_size = 0.0;
    // Center of the bounding box.
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;
    std::string color;

    double left() const { return x - width / 2; }
    double right() const { return x + width / 2; }
    double top() const { return y - height / 2; }
    double bottom() const { return y + height / 2; }
};

struct WordCloudSpec {
    Canvas canvas;
    std::vector<CloudEntry> entries;
    std::vector<std::string> warnings;
};

bool boxes_overlap(const CloudEntry& a, const CloudEntry& b);

// Largest-first placement on an Archimedean spiral from the canvas center; the
// first position inside the canvas that overlaps no earlier box wins. Font
// size is affine in the score between min_font and max_font (max_font when all
// scores are equal). Words that fit nowhere are skipped with a warning.
WordCloudSpec layout_wordcloud(const std::vector<RankedTerm>& ranked, const CloudLayoutOptions& options = {},
                               const std::vector<std::string>& palette = {});

std::string render_svg(const WordCloudSpec& spec);
void render_svg(const WordCloudSpec& spec, const std::filesystem::path& path);

inline constexpr const char* kContrastGreen = "#1a9850";
inline constexpr const char* kContrastRed = "#d73027";

// Group A in green on the upper half of the canvas, group B in red on the lower half.
WordCloudSpec layout_contrast_cloud(const std::vector<RankedTerm>& group_a, const std::vector<RankedTerm>& group_b,
                                    const CloudLayoutOptions& options = {});
void render_contrast_cloud(const std::vector<RankedTerm>& group_a, const std::vector<RankedTerm>& group_b,
                           const CloudLayoutOptions& options, const std::filesystem::path& path);

// HTML page with the document text; every token whose term has r > 0 in
// cluster c is wrapped in a span whose background opacity is r. All other
// bytes are reproduced verbatim (HTML-escaped). `doc_label` is the cluster
// the document was assigned to.
std::string highlight_html(const Document& doc, const TokenStream& stream, const RelevanceTable& table,
                           std::size_t c, int doc_label);

enum class Bucket { Day, Week };

Bucket parse_bucket(const std::string& s);

struct TrendTable {
    std::vector<std::string> terms;
    std::vector<Timestamp> bucket_starts;       // contiguous
    std::vector<std::size_t> docs_per_bucket;
    std::vector<std::vector<std::size_t>> counts;  // [term][bucket]

    double rate(std::size_t term, std::size_t bucket) const;
};

// Weeks start on Monday.
Timestamp bucket_start(Timestamp t, Bucket bucket);

TrendTable term_trends(const Corpus& corpus, const std::vector<TokenStream>& streams,
                       const std::vector<std::string>& terms, Bucket bucket);

// term,bucket_start,count,rate
std::string trends_csv(const TrendTable& table);

}  // namespace relwords
