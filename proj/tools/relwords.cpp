// relwords: discover topics in a text corpus and summarize them by their
// relevant words.
//
//   relwords ingest   --dir texts/ --out corpus.jsonl
//   relwords fetch    --months 2016-12:2017-01 --out corpus.jsonl
//   relwords cluster  --corpus corpus.jsonl --run run/
//   relwords relevant --corpus corpus.jsonl --run run/
//   relwords wordcloud --corpus corpus.jsonl --run run/ --cluster 0 --top 50
//   relwords highlight --corpus corpus.jsonl --run run/ --doc <id>
//   relwords contrast --corpus corpus.jsonl --boundary 2017-01-16 --out contrast.svg
//   relwords trends   --corpus corpus.jsonl --terms trump,tuesday --by day --out trends.csv

#include <cctype>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relwords/archive.hpp"
#include "relwords/corpus.hpp"
#include "relwords/error.hpp"
#include "relwords/io.hpp"
#include "relwords/pipeline.hpp"
#include "relwords/report.hpp"

namespace fs = std::filesystem;
using namespace relwords;

namespace {

constexpr const char* kDefaultEndpoint = "https://api.nytimes.com/svc/archive/v1/{year}/{month}.json?api-key={key}";

void add_config_flags(CLI::App* cmd, PipelineConfig& cfg) {
    cmd->add_option("--min-df", cfg.min_df, "Minimum document frequency of a term")->capture_default_str();
    cmd->add_option("--delta", cfg.bigram_discount, "Bigram count discount")->capture_default_str();
    cmd->add_option("--seed", cfg.bigram_seed, "Seed of the random bigram baseline")->capture_default_str();
    cmd->add_option("--components", cfg.kpca_components, "Kernel PCA components")->capture_default_str();
    cmd->add_option("--eps", cfg.eps, "DBSCAN cosine distance threshold")->capture_default_str();
    cmd->add_option("--min-pts", cfg.min_pts, "DBSCAN minimum neighborhood size")->capture_default_str();
    cmd->add_option("--epsilon", cfg.epsilon, "Floor of the FPR in the rate quotient")->capture_default_str();
    cmd->add_option("--top-k,--top", cfg.top_k, "Words per cloud")->capture_default_str();
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string lowercase(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::size_t resolve_cluster(const RelevanceTable& table, int cluster) {
    if (cluster < 0 || static_cast<std::size_t>(cluster) >= table.n_clusters()) {
        throw Error("cluster " + std::to_string(cluster) + " does not exist (" + std::to_string(table.n_clusters()) +
                    " clusters)");
    }
    return static_cast<std::size_t>(cluster);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relwords: relevant words of document clusters"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Normalize a directory or JSON-lines file into a corpus file");
    std::string ingest_dir, ingest_jsonl, ingest_out;
    JsonlFields fields;
    auto* src = ingest->add_option_group("source");
    src->add_option("--dir", ingest_dir, "Directory of plain-text files");
    src->add_option("--jsonl", ingest_jsonl, "JSON-lines file");
    src->require_option(1);
    ingest->add_option("--id-field", fields.id)->capture_default_str();
    ingest->add_option("--text-field", fields.text)->capture_default_str();
    ingest->add_option("--date-field", fields.date)->capture_default_str();
    ingest->add_option("--group-field", fields.group)->capture_default_str();
    ingest->add_option("--out", ingest_out, "Output corpus file")->required();

    // fetch
    auto* fetch = app.add_subcommand("fetch", "Download archive snippets for a month range");
    std::string months, endpoint = kDefaultEndpoint, api_key, fetch_out, cache_dir = ".relwords-cache";
    int max_attempts = 4;
    fetch->add_option("--months", months, "YYYY-MM or YYYY-MM:YYYY-MM")->required();
    fetch->add_option("--endpoint", endpoint, "URL template with {year}, {month}, {key}")->capture_default_str();
    fetch->add_option("--api-key", api_key, "API key (default: $RELWORDS_API_KEY)");
    fetch->add_option("--cache-dir", cache_dir)->capture_default_str();
    fetch->add_option("--retries", max_attempts, "Attempts per month")->capture_default_str();
    fetch->add_option("--out", fetch_out, "Output corpus file")->required();

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Cluster the corpus and write labels plus manifest");
    std::string corpus_path, run_path = "run";
    PipelineConfig cfg;
    cluster->add_option("--corpus", corpus_path, "Corpus file")->required();
    cluster->add_option("--run", run_path, "Run directory")->capture_default_str();
    add_config_flags(cluster, cfg);

    // relevant
    auto* relevant = app.add_subcommand("relevant", "Score relevant words per cluster");
    std::optional<double> epsilon_override;
    relevant->add_option("--corpus", corpus_path, "Corpus file")->required();
    relevant->add_option("--run", run_path, "Run directory")->capture_default_str();
    relevant->add_option("--epsilon", epsilon_override, "Override the manifest epsilon");

    // wordcloud
    auto* wordcloud = app.add_subcommand("wordcloud", "Render word clouds of clusters");
    std::optional<int> cloud_cluster;
    std::optional<std::size_t> top_override;
    std::string cloud_out;
    Canvas canvas;
    wordcloud->add_option("--corpus", corpus_path, "Corpus file")->required();
    wordcloud->add_option("--run", run_path, "Run directory")->capture_default_str();
    wordcloud->add_option("--cluster", cloud_cluster, "Cluster id (default: every cluster)");
    wordcloud->add_option("--top,--top-k", top_override, "Words per cloud");
    wordcloud->add_option("--out", cloud_out, "Output SVG (single cluster) or directory");
    wordcloud->add_option("--width", canvas.width)->capture_default_str();
    wordcloud->add_option("--height", canvas.height)->capture_default_str();

    // highlight
    auto* highlight = app.add_subcommand("highlight", "Highlight relevant words in one document");
    std::string doc_id, highlight_out;
    highlight->add_option("--corpus", corpus_path, "Corpus file")->required();
    highlight->add_option("--run", run_path, "Run directory")->capture_default_str();
    highlight->add_option("--doc", doc_id, "Document id")->required();
    highlight->add_option("--out", highlight_out, "Output HTML");

    // contrast
    auto* contrast = app.add_subcommand("contrast", "Contrast documents after vs before a date");
    std::string boundary, contrast_out = "contrast.svg", contrast_csv;
    PipelineConfig contrast_cfg;
    Canvas contrast_canvas;
    contrast->add_option("--corpus", corpus_path, "Corpus file")->required();
    contrast->add_option("--boundary", boundary, "First date of the later period")->required();
    contrast->add_option("--out", contrast_out, "Output SVG")->capture_default_str();
    contrast->add_option("--csv", contrast_csv, "Also write the two-group relevance CSV");
    contrast->add_option("--width", contrast_canvas.width)->capture_default_str();
    contrast->add_option("--height", contrast_canvas.height)->capture_default_str();
    add_config_flags(contrast, contrast_cfg);

    // trends
    auto* trends = app.add_subcommand("trends", "Document rate of terms over time");
    std::string terms_arg, by = "day", trends_out = "trends.csv";
    trends->add_option("--corpus", corpus_path, "Corpus file")->required();
    trends->add_option("--terms", terms_arg, "Comma-separated terms")->required();
    trends->add_option("--by", by, "day or week")->capture_default_str();
    trends->add_option("--out", trends_out, "Output CSV")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            const Corpus corpus = ingest_dir.empty() ? load_jsonl(ingest_jsonl, fields) : load_dir(ingest_dir);
            save_jsonl(corpus, ingest_out);
            std::cout << "wrote " << corpus.size() << " documents to " << ingest_out << "\n";
        } else if (*fetch) {
            ArchiveRequest req;
            req.url_template = endpoint;
            const auto colon = months.find(':');
            req.first = parse_year_month(months.substr(0, colon));
            req.last = colon == std::string::npos ? req.first : parse_year_month(months.substr(colon + 1));
            if (api_key.empty()) {
                if (const char* env = std::getenv("RELWORDS_API_KEY")) api_key = env;
            }
            req.api_key = api_key;
            req.cache_dir = cache_dir;
            req.retry.max_attempts = max_attempts;
            const auto result = fetch_archive(req);
            save_jsonl(result.corpus, fetch_out);
            std::cout << "wrote " << result.corpus.size() << " documents to " << fetch_out << " ("
                      << result.network_requests << " downloaded, " << result.cache_hits << " cached months, "
                      << result.skipped_empty << " empty snippets skipped)\n";
        } else if (*cluster) {
            const Corpus corpus = load_jsonl(corpus_path);
            const auto run = run_clustering(corpus, cfg);
            print_warnings([&] {
                std::vector<std::string> w;
                for (const auto& id : run.matrix.zero_rows) w.push_back("document \"" + id + "\" has an all-zero vector");
                return w;
            }());
            write_run(RunDir{run_path}, corpus, cfg, run);
            std::cout << "clusters: " << run.assignment.n_clusters << "\n"
                      << "noise: " << run.assignment.noise_count() << "\n"
                      << "components: " << run.model.n_components() << "\n"
                      << "bigrams: " << run.pre.bigrams.selected.size() << "\n";
        } else if (*relevant) {
            const Corpus corpus = load_jsonl(corpus_path);
            const RunDir dir{run_path};
            auto run = load_run(dir, corpus);
            if (epsilon_override) run.config.epsilon = *epsilon_override;
            const auto table = cluster_relevance(run.streams, run.assignment, run.config);
            print_warnings(table.warnings);
            write_relevance_csv(table, dir.relevance());
            for (std::size_t c = 0; c < table.n_clusters(); ++c) {
                std::cout << "cluster " << table.cluster_names[c] << ":";
                for (const auto& t : rank_terms(table, c, 10)) std::cout << " " << t.term;
                std::cout << "\n";
            }
        } else if (*wordcloud) {
            const Corpus corpus = load_jsonl(corpus_path);
            const RunDir dir{run_path};
            const auto run = load_run(dir, corpus);
            const auto table = cluster_relevance(run.streams, run.assignment, run.config);
            CloudLayoutOptions opts;
            opts.top_k = top_override.value_or(run.config.top_k);
            opts.canvas = canvas;
            std::vector<std::size_t> clusters;
            if (cloud_cluster) {
                clusters.push_back(resolve_cluster(table, *cloud_cluster));
            } else {
                for (std::size_t c = 0; c < table.n_clusters(); ++c) clusters.push_back(c);
            }
            for (const auto c : clusters) {
                const auto ranked = rank_terms(table, c, opts.top_k);
                if (ranked.empty()) {
                    std::cerr << "warning: cluster " << c << " has no relevant words; skipped\n";
                    continue;
                }
                const auto spec = layout_wordcloud(ranked, opts);
                print_warnings(spec.warnings);
                fs::path out = "cluster" + std::to_string(c) + ".svg";
                if (!cloud_out.empty()) out = cloud_cluster ? fs::path(cloud_out) : fs::path(cloud_out) / out;
                else out = dir.root / out;
                render_svg(spec, out);
                std::cout << out.string() << "\n";
            }
        } else if (*highlight) {
            const Corpus corpus = load_jsonl(corpus_path);
            const auto run = load_run(RunDir{run_path}, corpus);
            std::size_t k = 0;
            while (k < corpus.size() && corpus.docs[k].id != doc_id) ++k;
            if (k == corpus.size()) throw Error("no document with id \"" + doc_id + "\"");
            const auto table = cluster_relevance(run.streams, run.assignment, run.config);
            const int label = run.assignment.labels[k];
            if (label == kNoise) throw Error("document \"" + doc_id + "\" is noise and belongs to no cluster");
            const auto c = resolve_cluster(table, label);
            const auto html = highlight_html(corpus.docs[k], run.streams[k], table, c, label);
            const fs::path out = highlight_out.empty() ? fs::path(run_path) / ("highlight-" + std::to_string(k) + ".html")
                                                       : fs::path(highlight_out);
            write_file_atomic(out, html);
            std::cout << out.string() << "\n";
        } else if (*contrast) {
            contrast_cfg.validate();
            const Corpus corpus = split_by_period(load_jsonl(corpus_path), parse_timestamp(boundary));
            const auto pre = preprocess(corpus, contrast_cfg);
            const auto vocab = build_vocabulary(pre.streams, contrast_cfg.min_df);
            const auto table = contrast_relevance(corpus, pre.streams, vocab, std::string(kGroupAfter),
                                                  std::string(kGroupBefore), contrast_cfg.epsilon);
            if (!contrast_csv.empty()) write_relevance_csv(table, contrast_csv);
            CloudLayoutOptions opts;
            opts.top_k = contrast_cfg.top_k;
            opts.canvas = contrast_canvas;
            const auto spec = layout_contrast_cloud(rank_terms(table, 0, opts.top_k), rank_terms(table, 1, opts.top_k), opts);
            print_warnings(spec.warnings);
            render_svg(spec, contrast_out);
            std::cout << contrast_out << "\n";
        } else if (*trends) {
            const Corpus corpus = load_jsonl(corpus_path);
            std::vector<TokenStream> streams;
            for (const auto& d : corpus.docs) streams.push_back(normalize_tokenize(d.text, d.id));
            std::vector<std::string> terms;
            for (const auto& t : split_csv_list(terms_arg)) terms.push_back(lowercase(t));
            const auto table = term_trends(corpus, streams, terms, parse_bucket(by));
            write_file_atomic(trends_out, trends_csv(table));
            std::cout << trends_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "relwords " << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
