#include "hyperclust/linegraph.hpp"

#include "hyperclust/error.hpp"
#include "hyperclust/io.hpp"
#include "hyperclust/parallel.hpp"
#include "hyperclust/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace hyperclust {

namespace {

// Each chunk allocates an |E|-sized overlap counter, so chunk count is bounded.
std::size_t chunk_size(std::size_t edge_count) {
    return std::max<std::size_t>(2048, edge_count / 64 + 1);
}

void check_inputs(const TemporalHypergraph& graph, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ParameterError("sigma must be a positive finite number");
    if (!graph.has_numeric_times())
        throw InputError("line graph construction requires normalized times");
}

// Enumerates, for each source edge i, the edges j that follow i in (time, id)
// order on some shared vertex within the time window, with |M(i) ∩ M(j)|
// counted over the scanned vertices. Each unordered pair is produced exactly
// once, from its earlier endpoint.
class PairScanner {
public:
    PairScanner(const TemporalHypergraph& graph, double sigma, const std::vector<bool>& skip)
        : graph_(graph), sigma_(sigma), skip_(skip), overlap_(graph.edge_count(), 0) {}

    template <typename Emit>
    void scan(EdgeId i, Emit&& emit) {
        const Hyperedge& source = graph_.edge(i);
        const double ti = source.time;
        for (VertexId v : source.members) {
            if (!skip_.empty() && skip_[v])
                continue;
            auto incident = graph_.incident_edges(v);
            auto pos = std::lower_bound(incident.begin(), incident.end(), i,
                                        [&](EdgeId a, EdgeId b) { return before(a, b); });
            for (auto it = pos + 1; it < incident.end(); ++it) {
                const EdgeId j = *it;
                if (!(graph_.edge(j).time - ti < sigma_))
                    break;
                if (overlap_[j]++ == 0)
                    touched_.push_back(j);
            }
        }
        std::sort(touched_.begin(), touched_.end());
        for (EdgeId j : touched_) {
            emit(j, overlap_[j]);
            overlap_[j] = 0;
        }
        touched_.clear();
    }

private:
    bool before(EdgeId a, EdgeId b) const {
        const double ta = graph_.edge(a).time;
        const double tb = graph_.edge(b).time;
        return ta < tb || (ta == tb && a < b);
    }

    const TemporalHypergraph& graph_;
    double sigma_;
    const std::vector<bool>& skip_;
    std::vector<std::uint32_t> overlap_;
    std::vector<EdgeId> touched_;
};

template <typename T, typename Key>
void concat_and_sort(std::vector<std::vector<T>>& parts, std::vector<T>& out, Key key) {
    std::size_t total = 0;
    for (const auto& p : parts)
        total += p.size();
    out.clear();
    out.reserve(total);
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
        std::vector<T>().swap(p);
    }
    std::sort(out.begin(), out.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
}

}  // namespace

std::vector<std::pair<EdgeId, EdgeId>> candidate_pairs(const TemporalHypergraph& graph,
                                                       double sigma, unsigned workers) {
    check_inputs(graph, sigma);
    const std::size_t n = graph.edge_count();
    const std::vector<bool> no_skip;
    const std::size_t chunk = chunk_size(n);
    std::vector<std::vector<std::pair<EdgeId, EdgeId>>> parts((n + chunk - 1) / chunk);
    for_each_chunk(n, chunk, workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
        PairScanner scanner(graph, sigma, no_skip);
        auto& out = parts[c];
        for (std::size_t i = begin; i < end; ++i) {
            const auto source = static_cast<EdgeId>(i);
            scanner.scan(source, [&](EdgeId j, std::uint32_t) {
                out.emplace_back(std::min(source, j), std::max(source, j));
            });
        }
    });
    std::vector<std::pair<EdgeId, EdgeId>> pairs;
    concat_and_sort(parts, pairs, [](const auto& p) { return p; });
    return pairs;
}

WeightedLineGraph build_line_graph(const TemporalHypergraph& graph,
                                   const LineGraphOptions& options,
                                   LineGraphDiagnostics* diagnostics) {
    check_inputs(graph, options.sigma);
    if (options.similarity.kind == SimilarityKind::SizeFiltered)
        validate(options.similarity.filter);

    const std::size_t n = graph.edge_count();

    std::vector<bool> skip;
    std::vector<VertexId> capped;
    std::vector<bool> inexact_overlap;
    if (options.max_vertex_degree > 0) {
        skip.assign(graph.vertex_count(), false);
        inexact_overlap.assign(n, false);
        for (VertexId v = 0; v < graph.vertex_count(); ++v) {
            auto incident = graph.incident_edges(v);
            if (incident.size() > options.max_vertex_degree) {
                skip[v] = true;
                capped.push_back(v);
                for (EdgeId e : incident)
                    inexact_overlap[e] = true;
            }
        }
    }

    const std::size_t chunk = chunk_size(n);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::vector<std::vector<LineEdge>> parts(chunks);
    std::vector<std::size_t> candidates(chunks, 0);
    for_each_chunk(n, chunk, options.workers,
                   [&](std::size_t c, std::size_t begin, std::size_t end) {
        PairScanner scanner(graph, options.sigma, skip);
        auto& out = parts[c];
        for (std::size_t i = begin; i < end; ++i) {
            const auto source = static_cast<EdgeId>(i);
            const Hyperedge& a = graph.edge(source);
            scanner.scan(source, [&](EdgeId j, std::uint32_t overlap) {
                ++candidates[c];
                const Hyperedge& b = graph.edge(j);
                double s = 0.0;
                if (!inexact_overlap.empty() && (inexact_overlap[source] || inexact_overlap[j]))
                    s = similarity(options.similarity, a.members, b.members);
                else
                    s = similarity_from_overlap(options.similarity, overlap, a.members.size(),
                                                b.members.size());
                const double w = combined_weight(s, time_kernel(a.time, b.time, options.sigma));
                if (w > 0.0)
                    out.push_back({std::min(source, j), std::max(source, j), w});
            });
        }
    });

    WeightedLineGraph result;
    result.vertex_count = n;
    concat_and_sort(parts, result.edges, [](const LineEdge& e) { return std::pair(e.i, e.j); });

    if (diagnostics) {
        diagnostics->capped_vertices = std::move(capped);
        diagnostics->candidate_pairs = 0;
        for (std::size_t c : candidates)
            diagnostics->candidate_pairs += c;
    }
    return result;
}

ComponentSummary connected_components(const WeightedLineGraph& graph,
                                      std::size_t large_threshold) {
    UnionFind sets(graph.vertex_count);
    for (const LineEdge& e : graph.edges)
        sets.unite(e.i, e.j);

    ComponentSummary summary;
    summary.threshold = large_threshold;
    constexpr auto unassigned = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> id_of_root(graph.vertex_count, unassigned);
    summary.component_of.resize(graph.vertex_count);
    for (std::uint32_t v = 0; v < graph.vertex_count; ++v) {
        const std::uint32_t root = sets.find(v);
        if (id_of_root[root] == unassigned) {
            id_of_root[root] = static_cast<std::uint32_t>(summary.component_sizes.size());
            summary.component_sizes.push_back(0);
        }
        summary.component_of[v] = id_of_root[root];
        ++summary.component_sizes[id_of_root[root]];
    }
    summary.component_count = summary.component_sizes.size();
    summary.large_component_count = static_cast<std::size_t>(
        std::count_if(summary.component_sizes.begin(), summary.component_sizes.end(),
                      [&](std::size_t s) { return s >= large_threshold; }));
    return summary;
}

void write_line_graph_csv(std::ostream& out, const WeightedLineGraph& graph) {
    out << "i,j,w\n";
    for (const LineEdge& e : graph.edges)
        out << e.i << ',' << e.j << ',' << format_real(e.w) << '\n';
}

void write_component_summary_json(std::ostream& out, const ComponentSummary& summary) {
    out << "{\"components\": " << summary.component_count
        << ", \"large_components\": " << summary.large_component_count
        << ", \"threshold\": " << summary.threshold << "}\n";
}

}  // namespace hyperclust
