#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace testing {

namespace {

std::uint32_t root_of(std::vector<std::uint32_t>& parent, std::uint32_t v) {
    while (parent[v] != v)
        v = parent[v] = parent[parent[v]];
    return v;
}

Partition partition_of(std::vector<std::uint32_t> parent) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> blocks;
    for (std::uint32_t v = 0; v < parent.size(); ++v)
        blocks[root_of(parent, v)].push_back(v);
    Partition out;
    for (auto& [r, block] : blocks)
        out.push_back(std::move(block));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TemporalHypergraph make_graph(const std::vector<EdgeSpec>& specs) {
    std::vector<std::string> names;
    std::unordered_map<std::string, VertexId> index;
    std::vector<Hyperedge> edges;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        Hyperedge e;
        e.source_index = k;
        e.time = specs[k].time;
        e.labels = specs[k].labels;
        for (const std::string& name : specs[k].members) {
            auto [it, inserted] = index.try_emplace(name, static_cast<VertexId>(names.size()));
            if (inserted)
                names.push_back(name);
            e.members.push_back(it->second);
        }
        edges.push_back(std::move(e));
    }
    return TemporalHypergraph(std::move(names), std::move(edges));
}

TemporalHypergraph random_hypergraph(Rng& rng, std::size_t max_edges, std::size_t max_vertices,
                                     std::size_t max_size, double max_time) {
    const std::size_t n_vertices = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
    const std::size_t n_edges = std::uniform_int_distribution<std::size_t>(1, max_edges)(rng);
    // Integer times make |ti - tj| == sigma reachable.
    const bool integer_times = std::bernoulli_distribution(0.3)(rng);

    std::vector<std::string> names;
    for (std::size_t v = 0; v < n_vertices; ++v)
        names.push_back("v" + std::to_string(v));
    std::vector<VertexId> pool(n_vertices);
    std::iota(pool.begin(), pool.end(), 0);

    std::vector<Hyperedge> edges;
    for (std::size_t k = 0; k < n_edges; ++k) {
        Hyperedge e;
        e.source_index = k;
        const std::size_t size = std::uniform_int_distribution<std::size_t>(
            1, std::min(max_size, n_vertices))(rng);
        std::shuffle(pool.begin(), pool.end(), rng);
        e.members.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        const double t = std::uniform_real_distribution<double>(0.0, max_time)(rng);
        e.time = integer_times ? std::floor(t) : t;
        edges.push_back(std::move(e));
    }
    return TemporalHypergraph(std::move(names), std::move(edges));
}

WeightedLineGraph brute_force_line_graph(const TemporalHypergraph& graph, double sigma,
                                         const SimilarityConfig& config) {
    WeightedLineGraph out;
    out.vertex_count = graph.edge_count();
    for (EdgeId i = 0; i < graph.edge_count(); ++i) {
        for (EdgeId j = i + 1; j < graph.edge_count(); ++j) {
            const auto& a = graph.edge(i).members;
            const auto& b = graph.edge(j).members;
            std::vector<VertexId> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(common));
            const double inter = static_cast<double>(common.size());
            const double uni = static_cast<double>(a.size() + b.size()) - inter;
            double s = 0.0;
            switch (config.kind) {
            case SimilarityKind::Jaccard:
                s = inter / uni;
                break;
            case SimilarityKind::Simplicial:
                s = (std::includes(a.begin(), a.end(), b.begin(), b.end()) ||
                     std::includes(b.begin(), b.end(), a.begin(), a.end()))
                        ? 1.0
                        : 0.0;
                break;
            case SimilarityKind::SizeFiltered: {
                const double small = static_cast<double>(std::min(a.size(), b.size()));
                const double large = static_cast<double>(std::max(a.size(), b.size()));
                const auto& f = config.filter;
                s = small * f.slack_ratio + f.slack_offset >= large ? inter / uni : 0.0;
                break;
            }
            }
            const double dt = std::fabs(graph.edge(i).time - graph.edge(j).time);
            const double t = dt < sigma ? 1.0 - dt / sigma : 0.0;
            const double w = std::sqrt(s * t);
            if (w > 0.0)
                out.edges.push_back({i, j, w});
        }
    }
    return out;
}

WeightedLineGraph random_line_graph(Rng& rng, std::size_t max_vertices, double density,
                                    bool coarse) {
    WeightedLineGraph g;
    g.vertex_count = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
    std::bernoulli_distribution keep(density);
    std::uniform_int_distribution<int> grid(1, 10);
    std::uniform_real_distribution<double> fine(1e-6, 1.0);
    for (EdgeId i = 0; i < g.vertex_count; ++i)
        for (EdgeId j = i + 1; j < g.vertex_count; ++j)
            if (keep(rng))
                g.edges.push_back({i, j, coarse ? grid(rng) / 10.0 : fine(rng)});
    return g;
}

std::vector<Level> naive_single_linkage(const WeightedLineGraph& graph) {
    const std::size_t n = graph.vertex_count;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (const LineEdge& e : graph.edges) {
        const double dist = weight_to_distance(e.w);
        d[e.i][e.j] = std::min(d[e.i][e.j], dist);
        d[e.j][e.i] = d[e.i][e.j];
    }

    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<bool> active(n, true);
    std::vector<Level> levels;
    for (;;) {
        double best = inf;
        std::size_t a = 0;
        std::size_t b = 0;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                if (active[x] && active[y] && d[x][y] < best) {
                    best = d[x][y];
                    a = x;
                    b = y;
                }
        if (best == inf)
            break;
        // Cluster b is absorbed into a; single linkage keeps the minimum.
        for (std::size_t z = 0; z < n; ++z) {
            d[a][z] = d[z][a] = std::min(d[a][z], d[b][z]);
        }
        active[b] = false;
        parent[root_of(parent, static_cast<std::uint32_t>(b))] =
            root_of(parent, static_cast<std::uint32_t>(a));
        if (!levels.empty() && levels.back().distance == best)
            levels.back().partition = partition_of(parent);
        else
            levels.push_back({best, partition_of(parent)});
    }
    return levels;
}

std::vector<Level> dendrogram_levels(const Dendrogram& dendrogram) {
    const std::size_t n = dendrogram.leaf_count;
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    // Any leaf under each node stands in for it.
    std::vector<std::uint32_t> leaf_of(dendrogram.node_count());
    std::iota(leaf_of.begin(), leaf_of.begin() + static_cast<std::ptrdiff_t>(n), 0);
    std::vector<Level> levels;
    for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
        const Merge& m = dendrogram.merges[k];
        const std::uint32_t a = root_of(parent, leaf_of[m.left]);
        const std::uint32_t b = root_of(parent, leaf_of[m.right]);
        parent[b] = a;
        leaf_of[n + k] = a;
        if (!levels.empty() && levels.back().distance == m.distance)
            levels.back().partition = partition_of(parent);
        else
            levels.push_back({m.distance, partition_of(parent)});
    }
    return levels;
}

double exhaustive_max_forest_weight(const WeightedLineGraph& graph) {
    const std::size_t m = graph.edges.size();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<std::uint32_t> parent(graph.vertex_count);
        std::iota(parent.begin(), parent.end(), 0);
        double total = 0.0;
        bool acyclic = true;
        for (std::size_t k = 0; k < m && acyclic; ++k) {
            if (!(mask >> k & 1))
                continue;
            const std::uint32_t a = root_of(parent, graph.edges[k].i);
            const std::uint32_t b = root_of(parent, graph.edges[k].j);
            if (a == b)
                acyclic = false;
            parent[a] = b;
            total += graph.edges[k].w;
        }
        if (acyclic)
            best = std::max(best, total);
    }
    return best;
}

CondensedTree random_condensed_tree(Rng& rng, std::size_t max_clusters, std::size_t max_points) {
    CondensedTree tree;
    tree.min_cluster_size = 2;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_clusters)(rng);
    std::uniform_real_distribution<double> step(0.05, 3.0);
    std::uniform_int_distribution<std::size_t> own(0, max_points);

    tree.clusters.push_back({-1, 0.0, 0});
    for (std::size_t c = 1; c < k; ++c) {
        const auto p = std::uniform_int_distribution<std::size_t>(0, c - 1)(rng);
        tree.clusters.push_back({static_cast<std::int32_t>(p),
                                 tree.clusters[p].lambda_birth + step(rng), 0});
    }
    std::vector<bool> has_child(k, false);
    for (std::size_t c = 1; c < k; ++c)
        has_child[static_cast<std::size_t>(tree.clusters[c].parent)] = true;

    std::uint32_t next_point = 0;
    std::vector<std::size_t> own_points(k);
    for (std::size_t c = 0; c < k; ++c) {
        own_points[c] = std::max<std::size_t>(own(rng), has_child[c] ? 0 : 2);
        for (std::size_t p = 0; p < own_points[c]; ++p)
            tree.points.push_back({next_point++, static_cast<std::uint32_t>(c),
                                   tree.clusters[c].lambda_birth + step(rng)});
    }
    tree.point_count = next_point;

    for (std::size_t c = k; c-- > 0;) {
        tree.clusters[c].size += own_points[c];
        if (c > 0)
            tree.clusters[static_cast<std::size_t>(tree.clusters[c].parent)].size +=
                tree.clusters[c].size;
    }
    for (std::size_t c = 1; c < k; ++c)
        tree.children.push_back({static_cast<std::uint32_t>(c),
                                 static_cast<std::uint32_t>(tree.clusters[c].parent),
                                 tree.clusters[c].lambda_birth, tree.clusters[c].size});

    // Point ids in random order, so cluster numbering is exercised too.
    std::vector<std::uint32_t> relabel(tree.point_count);
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    for (PointEvent& p : tree.points)
        p.point = relabel[p.point];
    return tree;
}

Antichain exhaustive_antichain(const CondensedTree& tree, bool allow_single_root) {
    const std::size_t k = tree.clusters.size();
    const std::vector<double> stability = cluster_stability(tree);

    // Bit c of ancestors[x] is set when c is a proper ancestor of x.
    std::vector<std::uint32_t> ancestors(k, 0);
    for (std::size_t c = 1; c < k; ++c) {
        const auto p = static_cast<std::size_t>(tree.clusters[c].parent);
        ancestors[c] = ancestors[p] | (std::uint32_t{1} << p);
    }
    std::uint32_t eligible = 0;
    for (std::size_t c = 0; c < k; ++c)
        if (tree.clusters[c].parent >= 0 ||
            (allow_single_root && tree.clusters[c].size >= tree.min_cluster_size))
            eligible |= std::uint32_t{1} << c;

    const double neg_inf = -std::numeric_limits<double>::infinity();
    Antichain best{neg_inf, {}, neg_inf};
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << k); ++mask) {
        if ((mask & ~eligible) != 0)
            continue;
        bool antichain = true;
        double total = 0.0;
        for (std::size_t c = 0; c < k && antichain; ++c) {
            if (!(mask >> c & 1))
                continue;
            antichain = (ancestors[c] & mask) == 0;
            total += stability[c];
        }
        if (!antichain)
            continue;
        if (total > best.total) {
            best.runner_up = best.total;
            best.total = total;
            best_mask = mask;
        } else {
            best.runner_up = std::max(best.runner_up, total);
        }
    }
    for (std::uint32_t c = 0; c < k; ++c)
        if (best_mask >> c & 1)
            best.clusters.push_back(c);
    return best;
}

double adjusted_rand_index(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    const std::size_t n = a.size();
    if (n < 2)
        return 1.0;
    std::map<std::pair<std::int64_t, std::int64_t>, double> cells;
    std::map<std::int64_t, double> rows;
    std::map<std::int64_t, double> cols;
    for (std::size_t k = 0; k < n; ++k) {
        ++cells[{a[k], b[k]}];
        ++rows[a[k]];
        ++cols[b[k]];
    }
    const auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [key, count] : cells)
        index += pairs(count);
    double sum_rows = 0.0;
    for (const auto& [key, count] : rows)
        sum_rows += pairs(count);
    double sum_cols = 0.0;
    for (const auto& [key, count] : cols)
        sum_cols += pairs(count);
    const double expected = sum_rows * sum_cols / pairs(static_cast<double>(n));
    const double max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index == expected)
        return 1.0;
    return (index - expected) / (max_index - expected);
}

Planted planted_collaborations(Rng& rng, const PlantedOptions& options) {
    struct Paper {
        std::vector<std::string> members;
        double time;
        std::int64_t group;
    };
    std::vector<Paper> papers;
    std::vector<std::vector<std::string>> group_authors;

    std::uniform_real_distribution<double> start_at(0.0, options.horizon - options.window);
    for (std::size_t g = 0; g < options.groups; ++g) {
        const std::size_t m =
            std::uniform_int_distribution<std::size_t>(options.min_authors, options.max_authors)(rng);
        std::vector<std::string> authors;
        for (std::size_t a = 0; a < m; ++a)
            authors.push_back("planted " + std::to_string(g) + " author " + std::to_string(a));
        const double start = start_at(rng);
        std::uniform_real_distribution<double> when(start, start + options.window);
        std::uniform_int_distribution<std::size_t> size((m + 1) / 2, m);
        for (std::size_t p = 0; p < options.papers_per_group; ++p) {
            std::vector<std::string> members = authors;
            std::shuffle(members.begin(), members.end(), rng);
            members.resize(size(rng));
            papers.push_back({std::move(members), when(rng), static_cast<std::int64_t>(g)});
        }
        group_authors.push_back(std::move(authors));
    }

    std::uniform_int_distribution<std::size_t> noise_size(1, 4);
    std::uniform_int_distribution<std::size_t> pool(0, options.noise_pool - 1);
    std::uniform_int_distribution<std::size_t> any_group(0, options.groups - 1);
    std::bernoulli_distribution borrow(0.1);
    std::uniform_real_distribution<double> anytime(0.0, options.horizon);
    for (std::size_t p = 0; p < options.noise_papers; ++p) {
        std::vector<std::string> members;
        const std::size_t s = noise_size(rng);
        for (std::size_t k = 0; k < s; ++k) {
            if (options.groups > 0 && borrow(rng)) {
                const auto& authors = group_authors[any_group(rng)];
                members.push_back(authors[std::uniform_int_distribution<std::size_t>(
                    0, authors.size() - 1)(rng)]);
            } else {
                members.push_back("noise author " + std::to_string(pool(rng)));
            }
        }
        papers.push_back({std::move(members), anytime(rng),
                          static_cast<std::int64_t>(options.groups + p)});
    }
    std::shuffle(papers.begin(), papers.end(), rng);

    Planted out;
    std::vector<EdgeSpec> specs;
    for (Paper& p : papers) {
        specs.push_back({std::move(p.members), p.time});
        out.truth.push_back(p.group);
    }
    out.graph = make_graph(specs);
    out.planted_edges = options.groups * options.papers_per_group;
    return out;
}

TemporalHypergraph power_law_hypergraph(Rng& rng, std::size_t edges, std::size_t vertices,
                                        double horizon) {
    // P(size = k) proportional to k^-2.5 on [1, 200].
    std::vector<double> size_weights;
    for (int k = 1; k <= 200; ++k)
        size_weights.push_back(std::pow(k, -2.5));
    std::discrete_distribution<std::size_t> size_dist(size_weights.begin(), size_weights.end());

    // Author popularity ~ rank^-0.8.
    std::vector<double> popularity;
    popularity.reserve(vertices);
    for (std::size_t v = 1; v <= vertices; ++v)
        popularity.push_back(std::pow(static_cast<double>(v), -0.8));
    std::discrete_distribution<VertexId> author(popularity.begin(), popularity.end());
    std::uniform_real_distribution<double> when(0.0, horizon);

    std::vector<std::string> names;
    names.reserve(vertices);
    for (std::size_t v = 0; v < vertices; ++v)
        names.push_back("a" + std::to_string(v));
    std::vector<Hyperedge> out;
    out.reserve(edges);
    for (std::size_t k = 0; k < edges; ++k) {
        Hyperedge e;
        e.source_index = k;
        const std::size_t size = size_dist(rng) + 1;
        e.members.reserve(size);
        for (std::size_t m = 0; m < size; ++m)
            e.members.push_back(author(rng));
        e.time = when(rng);
        out.push_back(std::move(e));
    }
    return TemporalHypergraph(std::move(names), std::move(out));
}

}  // namespace testing
