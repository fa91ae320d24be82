#include "hyperclust/analysis.hpp"

#include "hyperclust/io.hpp"
#include "hyperclust/linegraph.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

namespace hyperclust {

namespace {

void require_matching(const TemporalHypergraph& graph, const Clustering& clustering) {
    if (clustering.labels.size() != graph.edge_count())
        throw ParameterError("clustering has " + std::to_string(clustering.labels.size()) +
                             " labels for " + std::to_string(graph.edge_count()) + " edges");
    for (std::int32_t l : clustering.labels)
        if (l != outlier_label && (l < 0 || static_cast<std::size_t>(l) >= clustering.clusters.size()))
            throw ParameterError("cluster label " + std::to_string(l) + " out of range");
}

// Edge ids per cluster, ascending.
std::vector<std::vector<EdgeId>> members_by_cluster(const Clustering& clustering) {
    std::vector<std::vector<EdgeId>> members(clustering.clusters.size());
    for (EdgeId e = 0; e < clustering.labels.size(); ++e)
        if (clustering.labels[e] != outlier_label)
            members[static_cast<std::size_t>(clustering.labels[e])].push_back(e);
    return members;
}

const std::string* primary_label(const Hyperedge& e) {
    return e.labels.empty() ? nullptr : &e.labels.front();
}

std::string json_string(std::string_view s) {
    return nlohmann::json(std::string(s)).dump();
}

void check_probability_vector(std::span<const double> p) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0))
            throw ParameterError("distribution has a negative or NaN entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ParameterError("distribution does not sum to 1");
}

}  // namespace

std::string_view subject_of(std::string_view category) {
    return category.substr(0, category.find('.'));
}

std::vector<ClusterReport> cluster_stats(const TemporalHypergraph& graph,
                                         const Clustering& clustering) {
    require_matching(graph, clustering);
    const auto members = members_by_cluster(clustering);

    std::vector<ClusterReport> reports;
    reports.reserve(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        ClusterReport r;
        r.id = static_cast<std::int32_t>(c);
        r.size = members[c].size();
        if (members[c].empty()) {
            reports.push_back(std::move(r));
            continue;
        }

        r.first_time = graph.edge(members[c].front()).time;
        r.last_time = r.first_time;
        double size_sum = 0.0;
        std::map<std::string, double> topics;
        std::set<std::string_view> subjects;
        std::map<VertexId, double> authors;
        std::size_t labeled = 0;
        for (EdgeId e : members[c]) {
            const Hyperedge& edge = graph.edge(e);
            r.first_time = std::min(r.first_time, edge.time);
            r.last_time = std::max(r.last_time, edge.time);
            size_sum += static_cast<double>(edge.members.size());
            const double share = 1.0 / static_cast<double>(edge.members.size());
            for (VertexId v : edge.members)
                authors[v] += share;
            if (const std::string* label = primary_label(edge)) {
                topics[*label] += 1.0;
                subjects.insert(subject_of(*label));
                ++labeled;
            }
        }
        const double n = static_cast<double>(r.size);
        r.lifetime = r.last_time - r.first_time;
        r.mean_edge_size = size_sum / n;
        double squares = 0.0;
        for (EdgeId e : members[c]) {
            const double d = static_cast<double>(graph.edge(e).members.size()) - r.mean_edge_size;
            squares += d * d;
        }
        r.stddev_edge_size = std::sqrt(squares / n);
        r.unique_categories = topics.size();
        r.unique_subjects = subjects.size();
        for (const auto& [label, count] : topics)
            r.topic_distribution.emplace_back(label, count / static_cast<double>(labeled));
        // Each edge contributes a total mass of exactly 1.
        for (const auto& [v, weight] : authors)
            r.author_distribution.emplace_back(v, weight / n);
        reports.push_back(std::move(r));
    }
    return reports;
}

VertexProjection project_to_vertices(const TemporalHypergraph& graph,
                                     const Clustering& clustering) {
    require_matching(graph, clustering);
    VertexProjection projection;
    projection.clusters_of.resize(graph.vertex_count());
    projection.degree.resize(graph.vertex_count());
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        auto incident = graph.incident_edges(v);
        projection.degree[v] = incident.size();
        auto& clusters = projection.clusters_of[v];
        for (EdgeId e : incident)
            if (clustering.labels[e] != outlier_label)
                clusters.push_back(clustering.labels[e]);
        std::sort(clusters.begin(), clusters.end());
        clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    }
    return projection;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ParameterError("correlation samples differ in length");
    if (x.size() < 2)
        throw UndefinedCorrelation("correlation needs at least two observations");
    const auto n = static_cast<long double>(x.size());
    long double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    long double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const long double dx = x[k] - mx;
        const long double dy = y[k] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0 || syy == 0)
        throw UndefinedCorrelation("correlation undefined for zero variance");
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

double degree_cluster_correlation(const VertexProjection& projection) {
    std::vector<double> degrees(projection.degree.begin(), projection.degree.end());
    std::vector<double> counts;
    counts.reserve(projection.clusters_of.size());
    for (const auto& c : projection.clusters_of)
        counts.push_back(static_cast<double>(c.size()));
    return pearson(degrees, counts);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty())
        throw ParameterError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw ParameterError("quantile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double hellinger(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw ParameterError("distributions have different supports");
    check_probability_vector(p);
    check_probability_vector(q);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = std::sqrt(p[k]) - std::sqrt(q[k]);
        sum += d * d;
    }
    return std::min(1.0, std::sqrt(sum / 2.0));
}

DistanceMatrix distribution_matrix(std::span<const ClusterReport> reports, DistributionKind kind,
                                   TopicGranularity granularity) {
    DistanceMatrix matrix;
    const std::size_t n = reports.size();
    for (const ClusterReport& r : reports)
        matrix.cluster_ids.push_back(r.id);
    matrix.values.assign(n * n, 0.0);

    std::vector<Distribution<std::uint32_t>> dists(n);
    if (kind == DistributionKind::Authors) {
        for (std::size_t a = 0; a < n; ++a)
            dists[a].assign(reports[a].author_distribution.begin(),
                            reports[a].author_distribution.end());
    } else {
        std::map<std::string, std::uint32_t> ids;
        std::vector<std::map<std::string, double>> mass(n);
        for (std::size_t a = 0; a < n; ++a) {
            if (reports[a].topic_distribution.empty())
                throw InputError("cluster " + std::to_string(reports[a].id) +
                                 " has no labeled edges");
            for (const auto& [label, p] : reports[a].topic_distribution) {
                std::string key = granularity == TopicGranularity::Subject
                                      ? std::string(subject_of(label))
                                      : label;
                mass[a][key] += p;
            }
        }
        for (const auto& m : mass)
            for (const auto& entry : m)
                ids.emplace(entry.first, 0);
        std::uint32_t next = 0;
        for (auto& entry : ids)
            entry.second = next++;
        for (std::size_t a = 0; a < n; ++a)
            for (const auto& [key, p] : mass[a])
                dists[a].emplace_back(ids.at(key), p);
    }

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double d = hellinger(dists[a], dists[b]);
            matrix.values[a * n + b] = d;
            matrix.values[b * n + a] = d;
        }
    return matrix;
}

TopicDiversity topic_diversity(const TemporalHypergraph& graph, const Clustering& clustering) {
    const auto reports = cluster_stats(graph, clustering);
    TopicDiversity result;
    for (const ClusterReport& r : reports)
        result.clusters.push_back({r.id, r.size, r.unique_subjects, r.unique_categories});

    std::set<std::string_view> subjects;
    std::set<std::string_view> categories;
    for (const Hyperedge& e : graph.edges())
        if (const std::string* label = primary_label(e)) {
            categories.insert(*label);
            subjects.insert(subject_of(*label));
        }
    result.global_subjects = subjects.size();
    result.global_categories = categories.size();
    return result;
}

std::vector<SweepRow> sigma_sweep(const TemporalHypergraph& graph, std::span<const double> sigmas,
                                  const SweepOptions& options) {
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
        if (!(sigmas[k] > 0.0) || !std::isfinite(sigmas[k]))
            throw ParameterError("sweep sigmas must be positive");
        if (k > 0 && sigmas[k] < sigmas[k - 1])
            throw ParameterError("sweep sigmas must be in ascending order");
    }

    std::vector<SweepRow> rows;
    for (double sigma : sigmas) {
        const auto start = std::chrono::steady_clock::now();
        SweepRow row;
        row.sigma = sigma;
        LineGraphOptions lg_options{sigma, options.similarity, options.workers, 0};
        if (options.extract) {
            ExtractOptions extract_options{lg_options, options.min_cluster_size, false};
            ExtractResult result = extract_detailed(graph, extract_options);
            const auto summary = connected_components(result.line_graph, options.large_threshold);
            row.line_graph_edges = result.line_graph.edges.size();
            row.components = summary.component_count;
            row.large_components = summary.large_component_count;
            row.clusters = result.clustering.clusters.size();
            row.outlier_fraction =
                graph.edge_count() == 0
                    ? 0.0
                    : static_cast<double>(result.clustering.outlier_count()) /
                          static_cast<double>(graph.edge_count());
        } else {
            const WeightedLineGraph lg = build_line_graph(graph, lg_options);
            const auto summary = connected_components(lg, options.large_threshold);
            row.line_graph_edges = lg.edges.size();
            row.components = summary.component_count;
            row.large_components = summary.large_component_count;
        }
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

void write_report_json(std::ostream& out, const TemporalHypergraph& graph,
                       std::span<const ClusterReport> reports, bool include_authors) {
    out << "[";
    for (std::size_t n = 0; n < reports.size(); ++n) {
        const ClusterReport& r = reports[n];
        out << (n ? ",\n " : "\n ") << "{\"id\": " << r.id << ", \"size\": " << r.size
            << ", \"first_time\": " << format_real(r.first_time)
            << ", \"last_time\": " << format_real(r.last_time)
            << ", \"lifetime\": " << format_real(r.lifetime)
            << ", \"mean_edge_size\": " << format_real(r.mean_edge_size)
            << ", \"stddev_edge_size\": " << format_real(r.stddev_edge_size)
            << ", \"unique_subjects\": " << r.unique_subjects
            << ", \"unique_categories\": " << r.unique_categories << ", \"topics\": {";
        for (std::size_t k = 0; k < r.topic_distribution.size(); ++k)
            out << (k ? ", " : "") << json_string(r.topic_distribution[k].first) << ": "
                << format_real(r.topic_distribution[k].second);
        out << "}";
        if (include_authors) {
            out << ", \"authors\": {";
            for (std::size_t k = 0; k < r.author_distribution.size(); ++k)
                out << (k ? ", " : "")
                    << json_string(graph.vertex_name(r.author_distribution[k].first)) << ": "
                    << format_real(r.author_distribution[k].second);
            out << "}";
        }
        out << "}";
    }
    out << (reports.empty() ? "]\n" : "\n]\n");
}

void write_projection_tsv(std::ostream& out, const TemporalHypergraph& graph,
                          const VertexProjection& projection) {
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        out << graph.vertex_name(v) << '\t';
        const auto& clusters = projection.clusters_of[v];
        for (std::size_t k = 0; k < clusters.size(); ++k)
            out << (k ? "," : "") << clusters[k];
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, bool with_clusters) {
    out << "sigma,lg_edges,components,large_components,seconds";
    if (with_clusters)
        out << ",clusters,outlier_fraction";
    out << '\n';
    for (const SweepRow& r : rows) {
        out << format_real(r.sigma) << ',' << r.line_graph_edges << ',' << r.components << ','
            << r.large_components << ',' << format_real(r.seconds);
        if (with_clusters)
            out << ',' << r.clusters << ',' << format_real(r.outlier_fraction);
        out << '\n';
    }
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& matrix) {
    const std::size_t n = matrix.cluster_ids.size();
    out << "cluster";
    for (std::int32_t id : matrix.cluster_ids)
        out << ',' << id;
    out << '\n';
    for (std::size_t a = 0; a < n; ++a) {
        out << matrix.cluster_ids[a];
        for (std::size_t b = 0; b < n; ++b)
            out << ',' << format_real(matrix.at(a, b));
        out << '\n';
    }
}

void write_topic_diversity_csv(std::ostream& out, const TopicDiversity& diversity) {
    out << "cluster,size,unique_subjects,unique_categories\n";
    for (const TopicDiversityRow& r : diversity.clusters)
        out << r.id << ',' << r.size << ',' << r.unique_subjects << ',' << r.unique_categories
            << '\n';
    out << "all," << "," << diversity.global_subjects << ',' << diversity.global_categories
        << '\n';
}

}  // namespace hyperclust
