#include "relwords/pipeline.hpp"

#include <sstream>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

namespace {

using json = nlohmann::json;

constexpr const char* kStale = "stale artifacts; rerun cluster";

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(std::string(stage) + ": " + e.what());
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(eps > 0.0 && eps < 2.0)) throw Error("eps must lie in (0, 2)");
    if (min_pts < 1) throw Error("min_pts must be at least 1");
    if (kpca_components < 1) throw Error("kpca_components must be at least 1");
    if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
    if (min_df < 1) throw Error("min_df must be at least 1");
}

json PipelineConfig::to_json() const {
    return json{{"min_df", min_df},   {"bigram_discount", bigram_discount},
                {"bigram_seed", bigram_seed}, {"kpca_components", kpca_components},
                {"eps", eps},         {"min_pts", min_pts},
                {"epsilon", epsilon}, {"top_k", top_k}};
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig c;
    try {
        c.min_df = j.at("min_df").get<std::size_t>();
        c.bigram_discount = j.at("bigram_discount").get<std::size_t>();
        c.bigram_seed = j.at("bigram_seed").get<std::uint64_t>();
        c.kpca_components = j.at("kpca_components").get<std::size_t>();
        c.eps = j.at("eps").get<double>();
        c.min_pts = j.at("min_pts").get<std::size_t>();
        c.epsilon = j.at("epsilon").get<double>();
        c.top_k = j.at("top_k").get<std::size_t>();
    } catch (const json::exception& e) {
        throw Error(std::string("manifest config: ") + e.what());
    }
    return c;
}

Preprocessed preprocess(const Corpus& corpus, const PipelineConfig& config) {
    Preprocessed out;
    std::vector<TokenStream> raw;
    raw.reserve(corpus.size());
    for (const auto& d : corpus.docs) raw.push_back(normalize_tokenize(d.text, d.id));
    out.candidates = score_bigrams(raw, config.bigram_discount);
    out.bigrams = select_bigrams(out.candidates, raw, 0, config.bigram_seed);
    out.streams.reserve(raw.size());
    for (const auto& s : raw) out.streams.push_back(apply_bigrams(s, out.bigrams.selected));
    return out;
}

ClusterRun run_clustering(const Corpus& corpus, const PipelineConfig& config) {
    config.validate();
    ClusterRun run;
    run.pre = in_stage("text", [&] { return preprocess(corpus, config); });
    run.matrix = in_stage("features", [&] {
        return vectorize(run.pre.streams, build_vocabulary(run.pre.streams, config.min_df));
    });
    run.model = in_stage("embedding", [&] { return fit_kpca(run.matrix, config.kpca_components); });
    run.embedding = in_stage("embedding", [&] { return transform(run.model, run.matrix); });
    run.assignment = in_stage("clustering", [&] {
        return dbscan(pairwise_distances(run.embedding), config.eps, config.min_pts);
    });
    return run;
}

RelevanceTable cluster_relevance(const std::vector<TokenStream>& streams, const ClusterAssignment& assignment,
                                 const PipelineConfig& config) {
    return in_stage("relevance", [&] {
        if (assignment.n_clusters == 0) throw Error("no clusters found (every document is noise)");
        const auto vocab = build_vocabulary(streams, config.min_df);
        return compute_relevance(build_occurrence_index(streams, vocab, assignment.labels, assignment.n_clusters),
                                 config.epsilon);
    });
}

json make_manifest(const Corpus& corpus, const PipelineConfig& config, const ClusterRun& run) {
    json m;
    m["tool"] = "relwords";
    m["corpus_hash"] = corpus_hash(corpus);
    m["n_docs"] = corpus.size();
    m["config"] = config.to_json();
    m["bigrams"] = {{"candidates", run.pre.candidates.size()},
                    {"selected", run.pre.bigrams.selected.size()},
                    {"threshold", run.pre.bigrams.threshold},
                    {"n_random", run.pre.bigrams.n_random}};
    m["n_terms"] = run.matrix.n_terms();
    m["n_components"] = run.model.n_components();
    m["n_clusters"] = run.assignment.n_clusters;
    m["n_noise"] = run.assignment.noise_count();
    return m;
}

void write_run(const RunDir& dir, const Corpus& corpus, const PipelineConfig& config, const ClusterRun& run) {
    write_token_streams(run.pre.streams, dir.tokens());
    write_bigrams_csv(run.pre.candidates, run.pre.bigrams.selected, dir.bigrams());
    write_assignment_csv(run.matrix.doc_ids, run.assignment, dir.labels());
    write_file_atomic(dir.manifest(), make_manifest(corpus, config, run).dump(2) + "\n");
}

void write_token_streams(const std::vector<TokenStream>& streams, const std::filesystem::path& path) {
    std::string out;
    for (const auto& s : streams) {
        out += json{{"id", s.doc_id}, {"tokens", s.tokens}}.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<TokenStream> read_token_streams(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<TokenStream> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = json::parse(line);
            out.push_back({j.at("id").get<std::string>(), j.at("tokens").get<std::vector<std::string>>()});
        } catch (const json::exception& e) {
            throw Error(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

LoadedRun load_run(const RunDir& dir, const Corpus& corpus) {
    namespace fs = std::filesystem;
    for (const auto& p : {dir.manifest(), dir.labels(), dir.tokens()}) {
        if (!fs::exists(p)) throw Error("missing " + p.string() + "; run cluster first");
    }
    LoadedRun run;
    try {
        run.manifest = json::parse(read_file(dir.manifest()));
    } catch (const json::exception& e) {
        throw Error(dir.manifest().string() + ": " + e.what());
    }
    run.config = PipelineConfig::from_json(run.manifest.at("config"));
    if (run.manifest.value("corpus_hash", std::string{}) != corpus_hash(corpus)) throw Error(kStale);

    std::vector<std::string> label_ids;
    run.assignment = read_assignment_csv(dir.labels(), &label_ids);
    run.streams = read_token_streams(dir.tokens());
    if (label_ids.size() != corpus.size() || run.streams.size() != corpus.size()) throw Error(kStale);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        if (label_ids[k] != corpus.docs[k].id || run.streams[k].doc_id != corpus.docs[k].id) throw Error(kStale);
    }
    if (run.manifest.contains("n_clusters") && run.manifest["n_clusters"].get<std::size_t>() != run.assignment.n_clusters) {
        throw Error(kStale);
    }
    return run;
}

}  // namespace relwords
