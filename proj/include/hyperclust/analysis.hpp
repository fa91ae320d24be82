#pragma once

#include "hyperclust/error.hpp"
#include "hyperclust/extraction.hpp"
#include "hyperclust/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperclust {

// Sparse probability vector, sorted by key.
template <typename Key>
using Distribution = std::vector<std::pair<Key, double>>;

struct ClusterReport {
    std::int32_t id = 0;
    std::size_t size = 0;
    double first_time = 0.0;
    double last_time = 0.0;
    double lifetime = 0.0;
    double mean_edge_size = 0.0;
    double stddev_edge_size = 0.0;  // population form
    std::size_t unique_subjects = 0;
    std::size_t unique_categories = 0;
    // Over primary category labels of the labeled edges.
    Distribution<std::string> topic_distribution;
    // Each edge gives 1/|M(e)| to each member; normalized to unit sum.
    Distribution<VertexId> author_distribution;
};

// "math.at" -> "math"; labels without a dot are their own subject.
std::string_view subject_of(std::string_view category);

// One report per cluster, in cluster-id order.
std::vector<ClusterReport> cluster_stats(const TemporalHypergraph& graph,
                                         const Clustering& clustering);

struct VertexProjection {
    // Sorted cluster ids per vertex; empty when every incident edge is an outlier.
    std::vector<std::vector<std::int32_t>> clusters_of;
    std::vector<std::size_t> degree;
};

VertexProjection project_to_vertices(const TemporalHypergraph& graph,
                                     const Clustering& clustering);

class UndefinedCorrelation : public Error {
public:
    using Error::Error;
};

// Pearson r of (degree, number of clusters) over all vertices.
double degree_cluster_correlation(const VertexProjection& projection);

// Pearson r of two equally long samples; throws UndefinedCorrelation on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Linearly interpolated quantile, q in [0, 1] (numpy's default rule).
double quantile(std::vector<double> values, double q);

// (1/sqrt 2) * || sqrt(p) - sqrt(q) ||_2 over a shared dense support. Both
// vectors must be non-negative and sum to 1 within 1e-9 (ParameterError otherwise).
double hellinger(std::span<const double> p, std::span<const double> q);

// Same distance for sparse distributions; missing keys carry zero mass.
template <typename Key>
double hellinger(const Distribution<Key>& p, const Distribution<Key>& q) {
    double sum = 0.0;
    auto i = p.begin();
    auto j = q.begin();
    while (i != p.end() || j != q.end()) {
        double a = 0.0;
        double b = 0.0;
        if (j == q.end() || (i != p.end() && i->first < j->first)) {
            a = i++->second;
        } else if (i == p.end() || j->first < i->first) {
            b = j++->second;
        } else {
            a = i++->second;
            b = j++->second;
        }
        const double d = std::sqrt(a) - std::sqrt(b);
        sum += d * d;
    }
    return std::min(1.0, std::sqrt(sum / 2.0));
}

enum class DistributionKind { Topics, Authors };
enum class TopicGranularity { Subject, Category };

struct DistanceMatrix {
    std::vector<std::int32_t> cluster_ids;
    // Row-major, cluster_ids.size() squared.
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const {
        return values[row * cluster_ids.size() + col];
    }
};

// Pairwise Hellinger distances between cluster distributions. Topic
// distributions require every cluster to have at least one labeled edge.
DistanceMatrix distribution_matrix(std::span<const ClusterReport> reports, DistributionKind kind,
                                   TopicGranularity granularity = TopicGranularity::Category);

struct TopicDiversityRow {
    std::int32_t id = 0;
    std::size_t size = 0;
    std::size_t unique_subjects = 0;
    std::size_t unique_categories = 0;
};

struct TopicDiversity {
    std::vector<TopicDiversityRow> clusters;
    std::size_t global_subjects = 0;
    std::size_t global_categories = 0;
};

TopicDiversity topic_diversity(const TemporalHypergraph& graph, const Clustering& clustering);

struct SweepOptions {
    SimilarityConfig similarity{};
    std::size_t min_cluster_size = 10;
    std::size_t large_threshold = 10;
    unsigned workers = 0;
    // Also run the full extraction and record cluster counts.
    bool extract = false;
};

struct SweepRow {
    double sigma = 0.0;
    std::size_t line_graph_edges = 0;
    std::size_t components = 0;
    std::size_t large_components = 0;
    double seconds = 0.0;
    std::size_t clusters = 0;
    double outlier_fraction = 0.0;
};

// Sigmas must be positive and ascending (ParameterError otherwise).
std::vector<SweepRow> sigma_sweep(const TemporalHypergraph& graph, std::span<const double> sigmas,
                                  const SweepOptions& options);

void write_report_json(std::ostream& out, const TemporalHypergraph& graph,
                       std::span<const ClusterReport> reports, bool include_authors = true);
// `vertex<TAB>cluster,cluster,...` for every vertex.
void write_projection_tsv(std::ostream& out, const TemporalHypergraph& graph,
                          const VertexProjection& projection);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, bool with_clusters);
// Header row `cluster,<id>,<id>,...`, then one row per cluster.
void write_distance_csv(std::ostream& out, const DistanceMatrix& matrix);
void write_topic_diversity_csv(std::ostream& out, const TopicDiversity& diversity);

}  // namespace hyperclust
