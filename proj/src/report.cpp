#include "relwords/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <unordered_map>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

namespace {

const std::vector<std::string> kDefaultPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void append_escaped(std::string& out, std::string_view s) {
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
}

bool inside(const CloudEntry& e, const Canvas& canvas) {
    return e.left() >= 0.0 && e.top() >= 0.0 && e.right() <= canvas.width && e.bottom() <= canvas.height;
}

}  // namespace

bool boxes_overlap(const CloudEntry& a, const CloudEntry& b) {
    return a.left() < b.right() && b.left() < a.right() && a.top() < b.bottom() && b.top() < a.bottom();
}

WordCloudSpec layout_wordcloud(const std::vector<RankedTerm>& ranked, const CloudLayoutOptions& options,
                               const std::vector<std::string>& palette) {
    WordCloudSpec spec;
    spec.canvas = options.canvas;
    if (ranked.empty()) return spec;
    const auto& colors = palette.empty() ? kDefaultPalette : palette;

    std::vector<RankedTerm> words = ranked;
    std::stable_sort(words.begin(), words.end(), [](const RankedTerm& a, const RankedTerm& b) { return a.r > b.r; });
    if (words.size() > options.top_k) words.resize(options.top_k);

    const auto [lo, hi] = std::minmax_element(words.begin(), words.end(),
                                              [](const RankedTerm& a, const RankedTerm& b) { return a.r < b.r; });
    const double r_min = lo->r;
    const double r_max = hi->r;
    const double cx = options.canvas.width / 2;
    const double cy = options.canvas.height / 2;
    const double max_radius = std::hypot(options.canvas.width, options.canvas.height) / 2;

    for (std::size_t i = 0; i < words.size(); ++i) {
        CloudEntry e;
        e.term = words[i].term;
        e.weight = words[i].r;
        e.font_size = r_max > r_min
                          ? options.min_font + (options.max_font - options.min_font) * (e.weight - r_min) / (r_max - r_min)
                          : options.max_font;
        e.width = options.char_advance * e.font_size * static_cast<double>(utf8_length(e.term));
        e.height = e.font_size;
        e.color = colors[spec.entries.size() % colors.size()];

        bool placed = false;
        for (double theta = 0.0;; theta += options.spiral_step) {
            const double radius = options.spiral_growth * theta;
            if (radius > max_radius) break;
            e.x = cx + radius * std::cos(theta);
            e.y = cy + radius * std::sin(theta);
            if (!inside(e, options.canvas)) continue;
            const bool clear = std::none_of(spec.entries.begin(), spec.entries.end(),
                                            [&](const CloudEntry& other) { return boxes_overlap(e, other); });
            if (clear) {
                placed = true;
                break;
            }
        }
        if (placed) {
            spec.entries.push_back(std::move(e));
        } else {
            spec.warnings.push_back("word \"" + e.term + "\" does not fit on the canvas; skipped");
        }
    }
    return spec;
}

std::string render_svg(const WordCloudSpec& spec) {
    const std::string w = fixed2(spec.canvas.width);
    const std::string h = fixed2(spec.canvas.height);
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w +
           " " + h + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#ffffff\"/>\n";
    for (const auto& e : spec.entries) {
        out += "<text x=\"" + fixed2(e.x) + "\" y=\"" + fixed2(e.y) + "\" font-size=\"" + fixed2(e.font_size) +
               "\" fill=\"" + e.color +
               "\" font-family=\"monospace\" text-anchor=\"middle\" dominant-baseline=\"central\">";
        append_escaped(out, e.term);
        out += "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

void render_svg(const WordCloudSpec& spec, const std::filesystem::path& path) {
    write_file_atomic(path, render_svg(spec));
}

WordCloudSpec layout_contrast_cloud(const std::vector<RankedTerm>& group_a, const std::vector<RankedTerm>& group_b,
                                    const CloudLayoutOptions& options) {
    if (group_a.empty() || group_b.empty()) throw Error("contrast cloud: both groups need relevant words");
    CloudLayoutOptions half = options;
    half.canvas.height = options.canvas.height / 2;
    WordCloudSpec upper = layout_wordcloud(group_a, half, {kContrastGreen});
    WordCloudSpec lower = layout_wordcloud(group_b, half, {kContrastRed});

    WordCloudSpec spec;
    spec.canvas = options.canvas;
    spec.entries = std::move(upper.entries);
    for (auto& e : lower.entries) {
        e.y += half.canvas.height;
        spec.entries.push_back(std::move(e));
    }
    spec.warnings = std::move(upper.warnings);
    spec.warnings.insert(spec.warnings.end(), lower.warnings.begin(), lower.warnings.end());
    return spec;
}

void render_contrast_cloud(const std::vector<RankedTerm>& group_a, const std::vector<RankedTerm>& group_b,
                           const CloudLayoutOptions& options, const std::filesystem::path& path) {
    render_svg(layout_contrast_cloud(group_a, group_b, options), path);
}

std::string highlight_html(const Document& doc, const TokenStream& stream, const RelevanceTable& table,
                           std::size_t c, int doc_label) {
    if (c >= table.n_clusters()) throw Error("highlight: cluster " + std::to_string(c) + " out of range");
    if (doc_label < 0 || static_cast<std::size_t>(doc_label) != c) {
        throw Error("highlight: document \"" + doc.id + "\" is not in cluster " + table.cluster_names[c]);
    }
    if (stream.doc_id != doc.id) throw Error("highlight: token stream belongs to \"" + stream.doc_id + "\"");

    std::unordered_map<std::string_view, std::size_t> term_index;
    for (std::size_t t = 0; t < table.terms.size(); ++t) term_index.emplace(table.terms[t], t);

    const auto spans = tokenize_spans(doc.text);
    std::string body;
    std::size_t cursor = 0;  // next byte of doc.text to emit
    std::size_t si = 0;
    const auto mismatch = [&] { return Error("highlight: token stream does not match text of \"" + doc.id + "\""); };
    for (const auto& token : stream.tokens) {
        std::size_t begin = 0;
        std::size_t end = 0;
        if (si < spans.size() && spans[si].term == token) {
            begin = spans[si].begin;
            end = spans[si].end;
            si += 1;
        } else if (si + 1 < spans.size() && token.size() == spans[si].term.size() + 1 + spans[si + 1].term.size() &&
                   token == spans[si].term + kBigramJoiner + spans[si + 1].term) {
            begin = spans[si].begin;
            end = spans[si + 1].end;
            si += 2;
        } else {
            throw mismatch();
        }
        const auto it = term_index.find(token);
        const double r = it == term_index.end() ? 0.0 : table.scores[c][it->second].r;
        if (!(r > 0.0)) continue;
        append_escaped(body, std::string_view(doc.text).substr(cursor, begin - cursor));
        body += "<span class=\"relevant\" style=\"background-color: rgba(255, 165, 0, " + format_double(r) +
                ")\" title=\"r=" + format_double(r) + "\">";
        append_escaped(body, std::string_view(doc.text).substr(begin, end - begin));
        body += "</span>";
        cursor = end;
    }
    if (si != spans.size()) throw mismatch();
    append_escaped(body, std::string_view(doc.text).substr(cursor));

    std::string out = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>";
    append_escaped(out, doc.id);
    out += "</title>\n</head>\n<body>\n<div class=\"doc\" style=\"white-space: pre-wrap\">";
    out += body;
    out += "</div>\n</body>\n</html>\n";
    return out;
}

Bucket parse_bucket(const std::string& s) {
    if (s == "day") return Bucket::Day;
    if (s == "week") return Bucket::Week;
    throw Error("unknown bucket \"" + s + "\" (expected day or week)");
}

double TrendTable::rate(std::size_t term, std::size_t bucket) const {
    const auto n = docs_per_bucket.at(bucket);
    return n == 0 ? 0.0 : static_cast<double>(counts.at(term).at(bucket)) / static_cast<double>(n);
}

Timestamp bucket_start(Timestamp t, Bucket bucket) {
    using namespace std::chrono;
    const sys_days day = floor<days>(t);
    if (bucket == Bucket::Day) return day;
    const unsigned iso = weekday{day}.iso_encoding();  // Monday = 1
    return sys_days{day - days{iso - 1}};
}

TrendTable term_trends(const Corpus& corpus, const std::vector<TokenStream>& streams,
                       const std::vector<std::string>& terms, Bucket bucket) {
    if (corpus.size() != streams.size()) throw Error("trends: token streams do not match corpus");
    std::vector<std::string> missing;
    for (const auto& d : corpus.docs) {
        if (!d.timestamp) missing.push_back(d.id);
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
        throw Error("trends: documents without timestamp: " + ids);
    }

    TrendTable table;
    table.terms = terms;
    if (corpus.empty()) return table;

    Timestamp first = bucket_start(*corpus.docs.front().timestamp, bucket);
    Timestamp last = first;
    for (const auto& d : corpus.docs) {
        const auto b = bucket_start(*d.timestamp, bucket);
        first = std::min(first, b);
        last = std::max(last, b);
    }
    const std::chrono::seconds step = bucket == Bucket::Day ? std::chrono::days{1} : std::chrono::days{7};
    for (Timestamp b = first; b <= last; b += step) table.bucket_starts.push_back(b);
    const auto n_buckets = table.bucket_starts.size();
    table.docs_per_bucket.assign(n_buckets, 0);
    table.counts.assign(terms.size(), std::vector<std::size_t>(n_buckets, 0));

    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const auto b = static_cast<std::size_t>((bucket_start(*corpus.docs[k].timestamp, bucket) - first) / step);
        ++table.docs_per_bucket[b];
        const auto& tokens = streams[k].tokens;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            if (std::find(tokens.begin(), tokens.end(), terms[t]) != tokens.end()) ++table.counts[t][b];
        }
    }
    return table;
}

std::string trends_csv(const TrendTable& table) {
    std::string out = "term,bucket_start,count,rate\n";
    for (std::size_t t = 0; t < table.terms.size(); ++t) {
        for (std::size_t b = 0; b < table.bucket_starts.size(); ++b) {
            out += csv_field(table.terms[t]) + ',' + format_date(table.bucket_starts[b]) + ',' +
                   std::to_string(table.counts[t][b]) + ',' + format_double(table.rate(t, b)) + '\n';
        }
    }
    return out;
}

}  // namespace relwords
