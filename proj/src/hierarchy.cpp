#include "hyperclust/hierarchy.hpp"

#include "hyperclust/io.hpp"
#include "hyperclust/union_find.hpp"

#include <algorithm>
#include <ostream>

namespace hyperclust {

std::vector<std::uint32_t> Dendrogram::roots() const {
    std::vector<bool> consumed(node_count(), false);
    for (const Merge& m : merges) {
        consumed[m.left] = true;
        consumed[m.right] = true;
    }
    std::vector<std::uint32_t> result;
    for (std::uint32_t node = 0; node < node_count(); ++node)
        if (!consumed[node])
            result.push_back(node);
    return result;
}

SpanningForest maximum_spanning_forest(const WeightedLineGraph& graph) {
    std::vector<LineEdge> order = graph.edges;
    std::sort(order.begin(), order.end(), [](const LineEdge& a, const LineEdge& b) {
        if (a.w != b.w)
            return a.w > b.w;
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    SpanningForest forest;
    forest.vertex_count = graph.vertex_count;
    UnionFind sets(graph.vertex_count);
    for (const LineEdge& e : order) {
        if (forest.edges.size() + 1 == graph.vertex_count)
            break;  // spanning tree complete
        if (sets.unite(e.i, e.j))
            forest.edges.push_back(e);
    }
    return forest;
}

Dendrogram single_linkage(const SpanningForest& forest) {
    struct Step {
        double distance;
        EdgeId i;
        EdgeId j;
    };
    std::vector<Step> steps;
    steps.reserve(forest.edges.size());
    for (const LineEdge& e : forest.edges)
        steps.push_back({weight_to_distance(e.w), e.i, e.j});
    std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
        if (a.distance != b.distance)
            return a.distance < b.distance;
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    Dendrogram dendrogram;
    dendrogram.leaf_count = forest.vertex_count;
    dendrogram.merges.reserve(steps.size());

    UnionFind sets(forest.vertex_count);
    // Current dendrogram node for each union-find root.
    std::vector<std::uint32_t> node_of(forest.vertex_count);
    for (std::uint32_t v = 0; v < forest.vertex_count; ++v)
        node_of[v] = v;

    for (const Step& s : steps) {
        const std::uint32_t ra = sets.find(s.i);
        const std::uint32_t rb = sets.find(s.j);
        if (ra == rb)
            continue;  // not a forest edge list; ignore cycle-closing edges
        const std::uint32_t a = node_of[ra];
        const std::uint32_t b = node_of[rb];
        const std::uint32_t size = sets.set_size(ra) + sets.set_size(rb);
        sets.unite(ra, rb);
        const auto created = static_cast<std::uint32_t>(dendrogram.leaf_count + dendrogram.merges.size());
        dendrogram.merges.push_back({std::min(a, b), std::max(a, b), s.distance, size});
        node_of[sets.find(ra)] = created;
    }
    return dendrogram;
}

void write_dendrogram_csv(std::ostream& out, const Dendrogram& dendrogram) {
    out << "left,right,distance,size\n";
    for (const Merge& m : dendrogram.merges)
        out << m.left << ',' << m.right << ',' << format_real(m.distance) << ',' << m.size << '\n';
}

}  // namespace hyperclust
