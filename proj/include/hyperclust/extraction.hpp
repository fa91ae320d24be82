#pragma once

#include "hyperclust/hierarchy.hpp"
#include "hyperclust/hypergraph.hpp"
#include "hyperclust/linegraph.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hyperclust {

inline constexpr std::int32_t outlier_label = -1;

// Merge distances below this are clamped before inversion, so exact
// duplicates merge at a finite lambda.
inline constexpr double min_merge_distance = 1e-12;

inline double distance_to_lambda(double distance) {
    return 1.0 / (distance < min_merge_distance ? min_merge_distance : distance);
}

struct CondensedCluster {
    std::int32_t parent = -1;  // -1 for the root
    double lambda_birth = 0.0;
    std::size_t size = 0;
};

// A line-graph vertex leaving `cluster` at `lambda`.
struct PointEvent {
    std::uint32_t point = 0;
    std::uint32_t cluster = 0;
    double lambda = 0.0;
};

// Cluster `child` splitting off `parent` at `lambda` with `size` points.
struct ChildEvent {
    std::uint32_t child = 0;
    std::uint32_t parent = 0;
    double lambda = 0.0;
    std::size_t size = 0;
};

// Dendrogram simplified under a minimum cluster size.
//
// There is a single root (cluster 0) whenever the dendrogram has at least one
// merge. When the line graph is disconnected, the components hang off the
// root at lambda = 0, as though joined at infinite distance: components with
// at least min_cluster_size vertices become child clusters (or continue as the
// root when there is only one of them) and smaller components fall out of the
// root at lambda = 0. Parents always precede their children.
struct CondensedTree {
    std::size_t point_count = 0;
    std::size_t min_cluster_size = 10;
    std::vector<CondensedCluster> clusters;
    std::vector<PointEvent> points;
    std::vector<ChildEvent> children;
};

// Throws ParameterError when min_cluster_size < 2.
CondensedTree condense(const Dendrogram& dendrogram, std::size_t min_cluster_size);

// Per-cluster excess of mass:
//   sum over leaving points (lambda - birth) + sum over child splits size * (lambda - birth).
std::vector<double> cluster_stability(const CondensedTree& tree);

struct ClusterInfo {
    std::int32_t id = 0;
    std::size_t size = 0;
    double stability = 0.0;
    std::uint32_t condensed_id = 0;
};

struct Clustering {
    // Cluster id or outlier_label per line-graph vertex (hyperedge).
    std::vector<std::int32_t> labels;
    // Indexed by cluster id; ids are numbered by smallest member.
    std::vector<ClusterInfo> clusters;

    double sigma = 0.0;
    SimilarityConfig similarity{};
    std::size_t min_cluster_size = 10;

    std::size_t outlier_count() const;
};

// Selects the antichain of condensed clusters with maximal total stability,
// bottom-up: a cluster wins only when its stability strictly exceeds the best
// total of its descendants. The root is eligible only when allow_single_root
// is set and it has at least min_cluster_size points.
Clustering excess_of_mass(const CondensedTree& tree, bool allow_single_root = false);

struct ExtractOptions {
    LineGraphOptions line_graph{};
    std::size_t min_cluster_size = 10;
    bool allow_single_root = false;
};

struct ExtractResult {
    WeightedLineGraph line_graph;
    SpanningForest forest;
    Dendrogram dendrogram;
    CondensedTree condensed;
    Clustering clustering;
    LineGraphDiagnostics diagnostics;
};

// build_line_graph -> maximum_spanning_forest -> single_linkage -> condense -> excess_of_mass.
ExtractResult extract_detailed(const TemporalHypergraph& graph, const ExtractOptions& options);
Clustering extract(const TemporalHypergraph& graph, const ExtractOptions& options);

// `kind,parent,child,lambda,size`; kind is "point" or "cluster".
void write_condensed_tree_csv(std::ostream& out, const CondensedTree& tree);
// `edge_id<TAB>cluster_label`, outliers as -1.
void write_labels_tsv(std::ostream& out, const Clustering& clustering);
// Reads the labels.tsv format back; header optional. Malformed rows throw
// ParseError and a file that misses some edge throws InputError.
std::vector<std::int32_t> read_labels_tsv(std::istream& in, std::size_t edge_count);
// [{"id": .., "size": .., "stability": ..}, ...]
void write_clusters_json(std::ostream& out, const Clustering& clustering);

// Rebuilds cluster sizes from labels (stability unknown, set to 0).
Clustering clustering_from_labels(std::vector<std::int32_t> labels);

}  // namespace hyperclust
