#include "cli.hpp"

#include "hyperclust/analysis.hpp"
#include "hyperclust/error.hpp"
#include "hyperclust/extraction.hpp"
#include "hyperclust/hierarchy.hpp"
#include "hyperclust/io.hpp"
#include "hyperclust/linegraph.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

namespace hyperclust::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct RunConfig {
    std::string input;
    std::string incidence;
    std::string output;
    std::string config_file;

    double sigma = 0.0;
    std::string similarity = "jaccard";
    double slack_ratio = 1.1;
    double slack_offset = 2.0;
    std::size_t min_cluster_size = 10;
    bool allow_single_root = false;
    std::string time_unit = "days";
    std::string clean_prefix = "n/a";
    bool no_clean = false;
    unsigned workers = 0;
    std::size_t max_vertex_degree = 0;
    bool dump_line_graph = false;
    bool dump_dendrogram = false;
    bool dump_condensed = false;
    bool no_author_distributions = false;

    std::vector<double> sigmas;
    bool sweep_extract = false;
    std::size_t large_threshold = 10;

    std::string labels;
    double time_bin = 30.0;
    std::string kind = "topics";
    std::string granularity = "category";
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error("sha256 unavailable");
    std::vector<char> buffer(1 << 16);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &length);
    std::ostringstream hex;
    for (unsigned int k = 0; k < length; ++k)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
    return hex.str();
}

// Collects output files in memory and publishes them together: each file is
// written to a hidden temporary and renamed into place, manifest last.
class OutputSet {
public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

    std::ostream& file(const std::string& name) {
        auto& slot = files_[name];
        if (!slot)
            slot = std::make_unique<std::ostringstream>();
        return *slot;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> result;
        for (const auto& entry : files_)
            result.push_back(entry.first);
        return result;
    }

    void commit(const ordered_json& manifest) {
        file("manifest.json") << manifest.dump(2) << '\n';
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
            throw ParameterError("cannot create output directory " + dir_);

        std::vector<std::pair<fs::path, fs::path>> staged;
        auto discard = [&] {
            for (const auto& [tmp, dest] : staged)
                fs::remove(tmp, ec);
        };
        auto stage = [&](const std::string& name) {
            const fs::path dest = fs::path(dir_) / name;
            const fs::path tmp = fs::path(dir_) / ("." + name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            staged.emplace_back(tmp, dest);
            const std::string data = files_.at(name)->str();
            out.write(data.data(), static_cast<std::streamsize>(data.size()));
            out.close();
            if (!out) {
                discard();
                throw ParameterError("cannot write " + dest.string());
            }
        };
        for (const auto& entry : files_)
            if (entry.first != "manifest.json")
                stage(entry.first);
        stage("manifest.json");
        for (const auto& [tmp, dest] : staged) {
            fs::rename(tmp, dest, ec);
            if (ec) {
                discard();
                throw ParameterError("cannot move output into " + dest.string());
            }
        }
    }

private:
    std::string dir_;
    std::map<std::string, std::unique_ptr<std::ostringstream>> files_;
};

ordered_json real(double value) {
    return ordered_json::parse(format_real(value));
}

TimeUnit time_unit_of(const RunConfig& c) {
    auto unit = parse_time_unit(c.time_unit);
    if (!unit)
        throw ParameterError("unknown time unit '" + c.time_unit + "'");
    return *unit;
}

SimilarityConfig similarity_of(const RunConfig& c) {
    auto kind = parse_similarity_kind(c.similarity);
    if (!kind)
        throw ParameterError("unknown similarity '" + c.similarity + "'");
    SimilarityConfig config{*kind, {c.slack_ratio, c.slack_offset}};
    validate(config.filter);
    return config;
}

void check_min_cluster_size(const RunConfig& c) {
    if (c.min_cluster_size < 2)
        throw ParameterError("--min-cluster-size must be at least 2");
}

struct Dataset {
    TemporalHypergraph graph;
    CleanReport clean;
};

Dataset load_dataset(const RunConfig& c, std::ostream& log) {
    const TimeUnit unit = time_unit_of(c);
    Stopwatch clock;
    TemporalHypergraph raw;
    std::ifstream in(c.input, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + c.input);
    try {
        if (c.incidence.empty()) {
            raw = parse_jsonl(in);
        } else {
            std::ifstream incidence(c.incidence, std::ios::binary);
            if (!incidence)
                throw InputError("cannot open " + c.incidence);
            raw = parse_csv(in, incidence);
        }
    } catch (const ParseError& e) {
        throw InputError(c.input + ": " + e.what());
    }

    Dataset data;
    if (c.no_clean) {
        data.graph = normalize_times(raw, unit);
    } else {
        auto cleaned = clean_authors(raw, c.clean_prefix);
        data.clean = cleaned.report;
        data.graph = normalize_times(cleaned.graph, unit);
    }
    log << "hyperclust: loaded " << data.graph.edge_count() << " edges, "
        << data.graph.vertex_count() << " vertices (" << data.clean.removed_edges
        << " edges and " << data.clean.removed_vertices << " vertices removed) in "
        << format_real(clock.seconds()) << " s\n";
    return data;
}

ordered_json manifest_base(const std::string& command, const RunConfig& c) {
    ordered_json m;
    m["tool"] = "hyperclust";
    m["command"] = command;
    ordered_json inputs = ordered_json::array();
    for (const std::string* path : {&c.input, &c.incidence, &c.labels}) {
        if (path->empty())
            continue;
        inputs.push_back({{"path", *path}, {"sha256", sha256_file(*path)}});
    }
    m["inputs"] = inputs;
    ordered_json p;
    p["time_unit"] = c.time_unit;
    p["clean_prefix"] = c.no_clean ? ordered_json(nullptr) : ordered_json(c.clean_prefix);
    m["parameters"] = p;
    return m;
}

void add_similarity_parameters(ordered_json& p, const RunConfig& c) {
    p["similarity"] = c.similarity;
    if (c.similarity != "jaccard" && c.similarity != "simplicial") {
        p["slack_ratio"] = real(c.slack_ratio);
        p["slack_offset"] = real(c.slack_offset);
    }
    p["min_cluster_size"] = c.min_cluster_size;
    p["allow_single_root"] = c.allow_single_root;
    p["max_vertex_degree"] = c.max_vertex_degree;
}

void finish(OutputSet& outputs, ordered_json manifest) {
    ordered_json files = ordered_json::array();
    for (const std::string& name : outputs.names())
        files.push_back(name);
    manifest["outputs"] = files;
    outputs.commit(manifest);
}

Clustering load_clustering(const RunConfig& c, const TemporalHypergraph& graph) {
    std::ifstream in(c.labels, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + c.labels);
    try {
        return clustering_from_labels(read_labels_tsv(in, graph.edge_count()));
    } catch (const ParseError& e) {
        throw InputError(c.labels + ": " + e.what());
    }
}

int cmd_ingest(const RunConfig& c, std::ostream& log) {
    time_unit_of(c);
    Dataset data = load_dataset(c, log);
    OutputSet outputs(c.output);
    write_jsonl(outputs.file("cleaned.jsonl"), data.graph);
    write_id_map(outputs.file("id_map.tsv"), data.graph);
    outputs.file("clean_report.json") << "{\"removed_vertices\": " << data.clean.removed_vertices
                                      << ", \"removed_edges\": " << data.clean.removed_edges
                                      << "}\n";
    finish(outputs, manifest_base("ingest", c));
    return exit_ok;
}

int cmd_cluster(const RunConfig& c, std::ostream& log) {
    if (!(c.sigma > 0.0))
        throw ParameterError("--sigma must be positive");
    const SimilarityConfig similarity = similarity_of(c);
    check_min_cluster_size(c);
    Dataset data = load_dataset(c, log);

    Stopwatch clock;
    ExtractOptions options{{c.sigma, similarity, c.workers, c.max_vertex_degree},
                           c.min_cluster_size,
                           c.allow_single_root};
    ExtractResult result = extract_detailed(data.graph, options);
    if (!result.diagnostics.capped_vertices.empty()) {
        log << "hyperclust: warning: degree cap skipped "
            << result.diagnostics.capped_vertices.size() << " vertices:";
        for (VertexId v : result.diagnostics.capped_vertices)
            log << ' ' << data.graph.vertex_name(v);
        log << '\n';
    }
    const Clustering& clustering = result.clustering;
    const double outlier_fraction =
        data.graph.edge_count() == 0 ? 0.0
                                     : static_cast<double>(clustering.outlier_count()) /
                                           static_cast<double>(data.graph.edge_count());
    log << "hyperclust: line graph " << result.line_graph.edges.size() << " edges; "
        << clustering.clusters.size() << " clusters, " << format_real(100.0 * outlier_fraction)
        << "% outliers in " << format_real(clock.seconds()) << " s\n";

    OutputSet outputs(c.output);
    write_labels_tsv(outputs.file("labels.tsv"), clustering);
    write_clusters_json(outputs.file("clusters.json"), clustering);
    const auto reports = cluster_stats(data.graph, clustering);
    write_report_json(outputs.file("report.json"), data.graph, reports, !c.no_author_distributions);
    if (c.dump_line_graph) {
        write_line_graph_csv(outputs.file("line_graph.csv"), result.line_graph);
        write_component_summary_json(outputs.file("components.json"),
                                     connected_components(result.line_graph));
    }
    if (c.dump_dendrogram)
        write_dendrogram_csv(outputs.file("dendrogram.csv"), result.dendrogram);
    if (c.dump_condensed)
        write_condensed_tree_csv(outputs.file("condensed_tree.csv"), result.condensed);

    ordered_json manifest = manifest_base("cluster", c);
    manifest["parameters"]["sigma"] = real(c.sigma);
    add_similarity_parameters(manifest["parameters"], c);
    finish(outputs, manifest);
    return exit_ok;
}

int cmd_sweep(const RunConfig& c, std::ostream& log) {
    if (c.sigmas.empty())
        throw ParameterError("--sigmas needs at least one value");
    for (std::size_t k = 0; k < c.sigmas.size(); ++k) {
        if (!(c.sigmas[k] > 0.0))
            throw ParameterError("--sigmas values must be positive");
        if (k > 0 && c.sigmas[k] < c.sigmas[k - 1])
            throw ParameterError("--sigmas must be sorted ascending");
    }
    const SimilarityConfig similarity = similarity_of(c);
    check_min_cluster_size(c);
    Dataset data = load_dataset(c, log);

    SweepOptions options{similarity, c.min_cluster_size, c.large_threshold, c.workers,
                         c.sweep_extract};
    const auto rows = sigma_sweep(data.graph, c.sigmas, options);
    for (const SweepRow& r : rows)
        log << "hyperclust: sigma " << format_real(r.sigma) << ": " << r.line_graph_edges
            << " line-graph edges, " << r.components << " components\n";

    OutputSet outputs(c.output);
    write_sweep_csv(outputs.file("sweep.csv"), rows, c.sweep_extract);
    ordered_json manifest = manifest_base("sweep", c);
    ordered_json sigmas = ordered_json::array();
    for (double s : c.sigmas)
        sigmas.push_back(real(s));
    manifest["parameters"]["sigmas"] = sigmas;
    manifest["parameters"]["extract"] = c.sweep_extract;
    manifest["parameters"]["large_threshold"] = c.large_threshold;
    add_similarity_parameters(manifest["parameters"], c);
    finish(outputs, manifest);
    return exit_ok;
}

int cmd_stats(const RunConfig& c, std::ostream& log) {
    if (!(c.time_bin > 0.0))
        throw ParameterError("--time-bin must be positive");
    Dataset data = load_dataset(c, log);
    const TemporalHypergraph& graph = data.graph;
    OutputSet outputs(c.output);

    ordered_json stats;
    stats["vertices"] = graph.vertex_count();
    stats["edges"] = graph.edge_count();
    ordered_json sizes = ordered_json::object();
    for (const auto& [size, count] : edge_size_histogram(graph))
        sizes[std::to_string(size)] = count;
    stats["edge_size_histogram"] = sizes;
    stats["time_bin_width"] = real(c.time_bin);
    ordered_json times = ordered_json::object();
    for (const auto& [bin, count] : edge_time_histogram(graph, c.time_bin))
        times[std::to_string(bin)] = count;
    stats["edge_time_histogram"] = times;

    if (!c.labels.empty()) {
        const Clustering clustering = load_clustering(c, graph);
        const auto reports = cluster_stats(graph, clustering);
        const auto projection = project_to_vertices(graph, clustering);
        const auto diversity = topic_diversity(graph, clustering);

        ordered_json cs;
        cs["clusters"] = clustering.clusters.size();
        cs["outlier_fraction"] =
            graph.edge_count() == 0
                ? real(0.0)
                : real(static_cast<double>(clustering.outlier_count()) /
                       static_cast<double>(graph.edge_count()));
        std::size_t unclustered = 0;
        for (const auto& clusters : projection.clusters_of)
            unclustered += clusters.empty();
        cs["vertices_without_cluster_fraction"] =
            graph.vertex_count() == 0 ? real(0.0)
                                      : real(static_cast<double>(unclustered) /
                                             static_cast<double>(graph.vertex_count()));
        try {
            cs["degree_cluster_correlation"] = real(degree_cluster_correlation(projection));
        } catch (const UndefinedCorrelation&) {
            cs["degree_cluster_correlation"] = nullptr;
        }
        std::vector<double> lifetimes;
        ordered_json cluster_sizes = ordered_json::object();
        std::map<std::size_t, std::size_t> size_histogram;
        for (const ClusterReport& r : reports) {
            lifetimes.push_back(r.lifetime);
            ++size_histogram[r.size];
        }
        for (const auto& [size, count] : size_histogram)
            cluster_sizes[std::to_string(size)] = count;
        if (!lifetimes.empty()) {
            double total = 0.0;
            for (double l : lifetimes)
                total += l;
            cs["mean_lifetime"] = real(total / static_cast<double>(lifetimes.size()));
            cs["p95_lifetime"] = real(quantile(lifetimes, 0.95));
        } else {
            cs["mean_lifetime"] = nullptr;
            cs["p95_lifetime"] = nullptr;
        }
        cs["cluster_size_histogram"] = cluster_sizes;
        cs["global_subjects"] = diversity.global_subjects;
        cs["global_categories"] = diversity.global_categories;
        stats["clustering"] = cs;

        write_report_json(outputs.file("report.json"), graph, reports, !c.no_author_distributions);
        write_projection_tsv(outputs.file("projection.tsv"), graph, projection);
        write_topic_diversity_csv(outputs.file("topic_diversity.csv"), diversity);
    }
    outputs.file("hypergraph_stats.json") << stats.dump(2) << '\n';

    ordered_json manifest = manifest_base("stats", c);
    manifest["parameters"]["time_bin"] = real(c.time_bin);
    finish(outputs, manifest);
    return exit_ok;
}

int cmd_export_distances(const RunConfig& c, std::ostream& log) {
    DistributionKind kind;
    if (c.kind == "topics")
        kind = DistributionKind::Topics;
    else if (c.kind == "authors")
        kind = DistributionKind::Authors;
    else
        throw ParameterError("--kind must be 'topics' or 'authors'");
    TopicGranularity granularity;
    if (c.granularity == "category")
        granularity = TopicGranularity::Category;
    else if (c.granularity == "subject")
        granularity = TopicGranularity::Subject;
    else
        throw ParameterError("--granularity must be 'subject' or 'category'");

    Dataset data = load_dataset(c, log);
    const Clustering clustering = load_clustering(c, data.graph);
    const auto reports = cluster_stats(data.graph, clustering);
    const DistanceMatrix matrix = distribution_matrix(reports, kind, granularity);

    OutputSet outputs(c.output);
    write_distance_csv(outputs.file("distances.csv"), matrix);
    ordered_json manifest = manifest_base("export-distances", c);
    manifest["parameters"]["kind"] = c.kind;
    manifest["parameters"]["granularity"] = c.granularity;
    finish(outputs, manifest);
    return exit_ok;
}

// Reads `key=value` lines; blank lines and '#' comments are skipped.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_number = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return std::string();
        return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_number;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError(path + ": line " + std::to_string(line_number) +
                                 ": expected key=value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

// Appends `--key=value` for config entries not already given as flags, so
// precedence is flags > config file > defaults.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size())
            path = args[k + 1];
        else if (args[k].starts_with("--config="))
            path = args[k].substr(9);
    }
    if (path.empty())
        return args;
    for (const auto& [key, value] : read_config_file(path)) {
        const std::string flag = "--" + key;
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.starts_with(flag + "=");
        });
        if (!given)
            args.push_back(flag + "=" + value);
    }
    return args;
}

void add_input_options(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--config", c.config_file, "key=value file; flags take precedence");
    cmd->add_option("--input", c.input, "JSON Lines file, or edges.csv with --incidence")->required();
    cmd->add_option("--incidence", c.incidence, "incidence.csv for the two-file CSV form");
    cmd->add_option("--output", c.output, "output directory")->required();
    cmd->add_option("--time-unit", c.time_unit, "days | seconds | months")->capture_default_str();
    cmd->add_option("--clean-prefix", c.clean_prefix, "drop vertices whose name starts with this")
        ->capture_default_str();
    cmd->add_flag("--no-clean", c.no_clean, "skip vertex cleaning");
}

void add_clustering_options(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--similarity", c.similarity, "jaccard | simplicial | size-filtered")
        ->capture_default_str();
    cmd->add_option("--slack-ratio", c.slack_ratio, "size filter ratio")->capture_default_str();
    cmd->add_option("--slack-offset", c.slack_offset, "size filter offset")->capture_default_str();
    cmd->add_option("--min-cluster-size", c.min_cluster_size)->capture_default_str();
    cmd->add_flag("--allow-single-root", c.allow_single_root, "let the root cluster be selected");
    cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--max-vertex-degree", c.max_vertex_degree,
                    "skip vertices with more incident edges during pairing (0 = off)")
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& log) {
    RunConfig c;
    CLI::App app{"Temporal hyperedge clustering via weighted line graphs", "hyperclust"};
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "parse, clean and normalize a raw dataset");
    add_input_options(ingest, c);

    auto* cluster = app.add_subcommand("cluster", "cluster hyperedges and write labels and reports");
    add_input_options(cluster, c);
    add_clustering_options(cluster, c);
    cluster->add_option("--sigma", c.sigma, "time kernel width, in --time-unit")->required();
    cluster->add_flag("--dump-line-graph", c.dump_line_graph);
    cluster->add_flag("--dump-dendrogram", c.dump_dendrogram);
    cluster->add_flag("--dump-condensed", c.dump_condensed);
    cluster->add_flag("--no-author-distributions", c.no_author_distributions);

    auto* sweep = app.add_subcommand("sweep", "line-graph size and components across sigmas");
    add_input_options(sweep, c);
    add_clustering_options(sweep, c);
    sweep->add_option("--sigmas", c.sigmas, "ascending list, e.g. 30,360")
        ->required()
        ->delimiter(',');
    sweep->add_flag("--extract", c.sweep_extract, "also run the full extraction per sigma");
    sweep->add_option("--large-threshold", c.large_threshold)->capture_default_str();

    auto* stats = app.add_subcommand("stats", "dataset histograms and per-cluster analyses");
    add_input_options(stats, c);
    stats->add_option("--labels", c.labels, "labels.tsv from `cluster`");
    stats->add_option("--time-bin", c.time_bin, "edge time histogram bin width")
        ->capture_default_str();
    stats->add_flag("--no-author-distributions", c.no_author_distributions);

    auto* distances = app.add_subcommand("export-distances",
                                         "pairwise Hellinger distances between clusters");
    add_input_options(distances, c);
    distances->add_option("--labels", c.labels, "labels.tsv from `cluster`")->required();
    distances->add_option("--kind", c.kind, "topics | authors")->capture_default_str();
    distances->add_option("--granularity", c.granularity, "subject | category")
        ->capture_default_str();

    try {
        std::vector<std::string> args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        log << "hyperclust: " << e.what() << '\n';
        return exit_parameter_error;
    } catch (const ParameterError& e) {
        log << "hyperclust: " << e.what() << '\n';
        return exit_parameter_error;
    }

    try {
        if (*ingest)
            return cmd_ingest(c, log);
        if (*cluster)
            return cmd_cluster(c, log);
        if (*sweep)
            return cmd_sweep(c, log);
        if (*stats)
            return cmd_stats(c, log);
        if (*distances)
            return cmd_export_distances(c, log);
    } catch (const ParameterError& e) {
        log << "hyperclust: parameter error: " << e.what() << '\n';
        return exit_parameter_error;
    } catch (const InputError& e) {
        log << "hyperclust: input error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        log << "hyperclust: internal error: " << e.what() << '\n';
        return exit_internal_error;
    }
    return exit_internal_error;
}

}  // namespace hyperclust::cli
