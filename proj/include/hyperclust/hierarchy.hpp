#pragma once

#include "hyperclust/linegraph.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hyperclust {

// Maximum-weight spanning forest, edges in selection order (decreasing w,
// ties by (i, j)).
struct SpanningForest {
    std::size_t vertex_count = 0;
    std::vector<LineEdge> edges;
};

// Dendrogram node ids: leaves are 0..leaf_count-1; merge k creates node
// leaf_count + k.
struct Merge {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double distance = 0.0;
    std::uint32_t size = 0;

    friend bool operator==(const Merge&, const Merge&) = default;
};

// Single-linkage merge sequence. A disconnected line graph yields a forest:
// merges never cross components, and each component ends in its own root.
struct Dendrogram {
    std::size_t leaf_count = 0;
    std::vector<Merge> merges;

    std::size_t node_count() const noexcept { return leaf_count + merges.size(); }
    bool is_leaf(std::uint32_t node) const noexcept { return node < leaf_count; }
    // Nodes never consumed by a later merge (component roots and isolated leaves), ascending.
    std::vector<std::uint32_t> roots() const;
};

// Weight -> merge distance.
inline double weight_to_distance(double w) { return 1.0 - w; }

SpanningForest maximum_spanning_forest(const WeightedLineGraph& graph);

// Replays the forest edges in increasing distance (ties by (i, j)); `left` is
// the smaller of the two merged node ids.
Dendrogram single_linkage(const SpanningForest& forest);

// `left,right,distance,size` rows in merge order, after a header.
void write_dendrogram_csv(std::ostream& out, const Dendrogram& dendrogram);

}  // namespace hyperclust
