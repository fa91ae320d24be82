#pragma once

#include "hyperclust/hypergraph.hpp"
#include "hyperclust/similarity.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace hyperclust {

struct LineEdge {
    EdgeId i = 0;
    EdgeId j = 0;
    double w = 0.0;

    friend bool operator==(const LineEdge&, const LineEdge&) = default;
};

// Sparse weighted line graph: one vertex per hyperedge, edges sorted by
// (i, j) with i < j and 0 < w <= 1.
struct WeightedLineGraph {
    std::size_t vertex_count = 0;
    std::vector<LineEdge> edges;
};

struct LineGraphOptions {
    double sigma = 0.0;
    SimilarityConfig similarity{};
    // 0 = one worker per hardware thread.
    unsigned workers = 0;
    // Vertices with more incident edges than this are skipped during
    // candidate generation; 0 disables the cap.
    std::size_t max_vertex_degree = 0;
};

struct LineGraphDiagnostics {
    // Vertices skipped by the degree cap, ascending.
    std::vector<VertexId> capped_vertices;
    // Distinct candidate pairs examined before zero-weight pairs were dropped.
    std::size_t candidate_pairs = 0;
};

// Every pair (i, j), i < j, with |t(i) - t(j)| < sigma sharing at least one
// vertex, each exactly once, sorted. Requires normalized times.
std::vector<std::pair<EdgeId, EdgeId>> candidate_pairs(const TemporalHypergraph& graph,
                                                       double sigma, unsigned workers = 0);

// Weights each candidate pair with sqrt(s * T_sigma) and keeps the positive ones.
WeightedLineGraph build_line_graph(const TemporalHypergraph& graph,
                                   const LineGraphOptions& options,
                                   LineGraphDiagnostics* diagnostics = nullptr);

struct ComponentSummary {
    std::size_t component_count = 0;
    std::size_t large_component_count = 0;
    std::size_t threshold = 10;
    // Dense component id per line-graph vertex, numbered by smallest member.
    std::vector<std::uint32_t> component_of;
    std::vector<std::size_t> component_sizes;
};

ComponentSummary connected_components(const WeightedLineGraph& graph,
                                      std::size_t large_threshold = 10);

// `i,j,w` rows after an `i,j,w` header.
void write_line_graph_csv(std::ostream& out, const WeightedLineGraph& graph);
// {"components": .., "large_components": .., "threshold": ..}
void write_component_summary_json(std::ostream& out, const ComponentSummary& summary);

}  // namespace hyperclust
