#pragma once

#include "hyperclust/extraction.hpp"
#include "hyperclust/hierarchy.hpp"
#include "hyperclust/hypergraph.hpp"
#include "hyperclust/linegraph.hpp"
#include "hyperclust/similarity.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing {

using namespace hyperclust;

using Rng = std::mt19937_64;

struct EdgeSpec {
    std::vector<std::string> members;
    double time = 0.0;
    std::vector<std::string> labels{};
};

// Hypergraph from named members; vertex ids follow first appearance.
TemporalHypergraph make_graph(const std::vector<EdgeSpec>& edges);

// Up to max_edges edges over max_vertices vertices, sizes in [1, max_size],
// times uniform in [0, max_time).
TemporalHypergraph random_hypergraph(Rng& rng, std::size_t max_edges, std::size_t max_vertices,
                                     std::size_t max_size, double max_time);

// All-pairs construction straight from the weight definition.
WeightedLineGraph brute_force_line_graph(const TemporalHypergraph& graph, double sigma,
                                         const SimilarityConfig& config);

// Random line graph; with `coarse` the weights come from a small grid so ties are common.
WeightedLineGraph random_line_graph(Rng& rng, std::size_t max_vertices, double density,
                                    bool coarse);

// One entry per distinct merge distance: the partition after every merge at
// or below that distance, each block sorted and blocks ordered by first element.
using Partition = std::vector<std::vector<std::uint32_t>>;
struct Level {
    double distance = 0.0;
    Partition partition;
};

// Naive agglomeration on the full distance matrix (missing edges are infinitely far).
std::vector<Level> naive_single_linkage(const WeightedLineGraph& graph);
// The same level sequence read off a dendrogram.
std::vector<Level> dendrogram_levels(const Dendrogram& dendrogram);

// Maximum total weight over every acyclic edge subset; small graphs only.
double exhaustive_max_forest_weight(const WeightedLineGraph& graph);

// Random condensed tree whose stabilities are all positive.
CondensedTree random_condensed_tree(Rng& rng, std::size_t max_clusters, std::size_t max_points);

struct Antichain {
    double total = 0.0;
    // Ascending condensed ids.
    std::vector<std::uint32_t> clusters;
    // Best total among antichains other than the optimum (-inf when none).
    double runner_up = 0.0;
};

// Enumerates every antichain of eligible clusters and keeps the best one.
Antichain exhaustive_antichain(const CondensedTree& tree, bool allow_single_root);

double adjusted_rand_index(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

struct PlantedOptions {
    std::size_t groups = 20;
    std::size_t min_authors = 5;
    std::size_t max_authors = 15;
    std::size_t papers_per_group = 15;
    double window = 200.0;
    std::size_t noise_papers = 500;
    double horizon = 3650.0;
    std::size_t noise_pool = 3000;
};

struct Planted {
    TemporalHypergraph graph;
    // Group index per edge; noise edges get a unique label each.
    std::vector<std::int64_t> truth;
    std::size_t planted_edges = 0;
};

Planted planted_collaborations(Rng& rng, const PlantedOptions& options = {});

// Power-law edge sizes and author popularity, times uniform in [0, horizon).
TemporalHypergraph power_law_hypergraph(Rng& rng, std::size_t edges, std::size_t vertices,
                                        double horizon);

}  // namespace testing
