#include "hyperclust/extraction.hpp"

#include "hyperclust/error.hpp"
#include "hyperclust/io.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace hyperclust {

namespace {

class Condenser {
public:
    Condenser(const Dendrogram& dendrogram, std::size_t min_cluster_size, CondensedTree& tree)
        : dendrogram_(dendrogram), min_size_(min_cluster_size), tree_(tree) {}

    std::size_t size_of(std::uint32_t node) const {
        return dendrogram_.is_leaf(node) ? 1 : merge_of(node).size;
    }

    std::uint32_t new_cluster(std::uint32_t parent, double lambda, std::size_t size) {
        const auto id = static_cast<std::uint32_t>(tree_.clusters.size());
        tree_.clusters.push_back({static_cast<std::int32_t>(parent), lambda, size});
        tree_.children.push_back({id, parent, lambda, size});
        return id;
    }

    void fall_out(std::uint32_t node, std::uint32_t cluster, double lambda) {
        stack_.assign(1, node);
        while (!stack_.empty()) {
            const std::uint32_t n = stack_.back();
            stack_.pop_back();
            if (dendrogram_.is_leaf(n)) {
                tree_.points.push_back({n, cluster, lambda});
            } else {
                const Merge& m = merge_of(n);
                stack_.push_back(m.right);
                stack_.push_back(m.left);
            }
        }
    }

    // Follows `cluster` down from `node` until it dissolves.
    void descend(std::uint32_t node, std::uint32_t cluster) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{node, cluster}};
        while (!work.empty()) {
            auto [n, c] = work.back();
            work.pop_back();
            if (dendrogram_.is_leaf(n)) {
                tree_.points.push_back({n, c, tree_.clusters[c].lambda_birth});
                continue;
            }
            const Merge& m = merge_of(n);
            const double lambda = distance_to_lambda(m.distance);
            const bool left_big = size_of(m.left) >= min_size_;
            const bool right_big = size_of(m.right) >= min_size_;
            if (left_big && right_big) {
                const std::uint32_t cr = new_cluster(c, lambda, size_of(m.right));
                const std::uint32_t cl = new_cluster(c, lambda, size_of(m.left));
                work.emplace_back(m.right, cr);
                work.emplace_back(m.left, cl);
            } else if (left_big) {
                fall_out(m.right, c, lambda);
                work.emplace_back(m.left, c);
            } else if (right_big) {
                fall_out(m.left, c, lambda);
                work.emplace_back(m.right, c);
            } else {
                fall_out(m.left, c, lambda);
                fall_out(m.right, c, lambda);
            }
        }
    }

private:
    const Merge& merge_of(std::uint32_t node) const {
        return dendrogram_.merges[node - dendrogram_.leaf_count];
    }

    const Dendrogram& dendrogram_;
    std::size_t min_size_;
    CondensedTree& tree_;
    std::vector<std::uint32_t> stack_;
};

}  // namespace

CondensedTree condense(const Dendrogram& dendrogram, std::size_t min_cluster_size) {
    if (min_cluster_size < 2)
        throw ParameterError("min_cluster_size must be at least 2");

    CondensedTree tree;
    tree.point_count = dendrogram.leaf_count;
    tree.min_cluster_size = min_cluster_size;
    if (dendrogram.merges.empty())
        return tree;

    Condenser condenser(dendrogram, min_cluster_size, tree);
    const std::vector<std::uint32_t> roots = dendrogram.roots();
    tree.clusters.push_back({-1, 0.0, dendrogram.leaf_count});

    if (roots.size() == 1) {
        condenser.descend(roots.front(), 0);
        return tree;
    }

    std::vector<std::uint32_t> large;
    for (std::uint32_t r : roots)
        if (condenser.size_of(r) >= min_cluster_size)
            large.push_back(r);
    for (std::uint32_t r : roots)
        if (condenser.size_of(r) < min_cluster_size)
            condenser.fall_out(r, 0, 0.0);

    if (large.size() == 1) {
        condenser.descend(large.front(), 0);
    } else {
        for (std::uint32_t r : large) {
            const std::uint32_t c = condenser.new_cluster(0, 0.0, condenser.size_of(r));
            condenser.descend(r, c);
        }
    }
    return tree;
}

std::vector<double> cluster_stability(const CondensedTree& tree) {
    std::vector<double> stability(tree.clusters.size(), 0.0);
    for (const PointEvent& p : tree.points)
        stability[p.cluster] += p.lambda - tree.clusters[p.cluster].lambda_birth;
    for (const ChildEvent& c : tree.children)
        stability[c.parent] +=
            static_cast<double>(c.size) * (c.lambda - tree.clusters[c.parent].lambda_birth);
    return stability;
}

std::size_t Clustering::outlier_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), outlier_label));
}

Clustering excess_of_mass(const CondensedTree& tree, bool allow_single_root) {
    const std::size_t k = tree.clusters.size();
    const std::vector<double> stability = cluster_stability(tree);

    std::vector<double> best(k, 0.0);
    std::vector<double> child_total(k, 0.0);
    std::vector<bool> has_children(k, false);
    std::vector<bool> selected(k, false);
    for (std::size_t c = k; c-- > 0;) {
        const CondensedCluster& cluster = tree.clusters[c];
        const bool eligible =
            cluster.parent >= 0 || (allow_single_root && cluster.size >= tree.min_cluster_size);
        if (eligible && (!has_children[c] || stability[c] > child_total[c])) {
            selected[c] = true;
            best[c] = stability[c];
        } else {
            best[c] = child_total[c];
        }
        if (cluster.parent >= 0) {
            const auto p = static_cast<std::size_t>(cluster.parent);
            child_total[p] += best[c];
            has_children[p] = true;
        }
    }

    // Top-down: the outermost selected cluster owns each subtree.
    constexpr auto none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> owner(k, none);
    for (std::size_t c = 0; c < k; ++c) {
        const std::int32_t parent = tree.clusters[c].parent;
        const std::uint32_t inherited = parent >= 0 ? owner[static_cast<std::size_t>(parent)] : none;
        owner[c] = inherited != none ? inherited : (selected[c] ? static_cast<std::uint32_t>(c) : none);
    }

    // Number selected clusters by their smallest member point.
    constexpr auto no_point = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> first_point(k, no_point);
    for (const PointEvent& p : tree.points)
        if (owner[p.cluster] != none && p.lambda > 0.0)
            first_point[owner[p.cluster]] = std::min(first_point[owner[p.cluster]], p.point);
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t c = 0; c < k; ++c)
        if (owner[c] == c)
            chosen.push_back(c);
    std::sort(chosen.begin(), chosen.end(), [&](std::uint32_t a, std::uint32_t b) {
        return first_point[a] != first_point[b] ? first_point[a] < first_point[b] : a < b;
    });

    Clustering result;
    result.min_cluster_size = tree.min_cluster_size;
    std::vector<std::int32_t> id_of(k, outlier_label);
    for (std::size_t n = 0; n < chosen.size(); ++n) {
        id_of[chosen[n]] = static_cast<std::int32_t>(n);
        result.clusters.push_back({static_cast<std::int32_t>(n), 0, stability[chosen[n]], chosen[n]});
    }

    result.labels.assign(tree.point_count, outlier_label);
    for (const PointEvent& p : tree.points) {
        // Points leaving at lambda 0 were never connected to the cluster.
        if (owner[p.cluster] == none || p.lambda <= 0.0)
            continue;
        const std::int32_t id = id_of[owner[p.cluster]];
        result.labels[p.point] = id;
        ++result.clusters[static_cast<std::size_t>(id)].size;
    }
    return result;
}

ExtractResult extract_detailed(const TemporalHypergraph& graph, const ExtractOptions& options) {
    if (options.min_cluster_size < 2)
        throw ParameterError("min_cluster_size must be at least 2");
    ExtractResult result;
    result.line_graph = build_line_graph(graph, options.line_graph, &result.diagnostics);
    result.forest = maximum_spanning_forest(result.line_graph);
    result.dendrogram = single_linkage(result.forest);
    result.condensed = condense(result.dendrogram, options.min_cluster_size);
    result.clustering = excess_of_mass(result.condensed, options.allow_single_root);
    result.clustering.sigma = options.line_graph.sigma;
    result.clustering.similarity = options.line_graph.similarity;
    return result;
}

Clustering extract(const TemporalHypergraph& graph, const ExtractOptions& options) {
    return extract_detailed(graph, options).clustering;
}

void write_condensed_tree_csv(std::ostream& out, const CondensedTree& tree) {
    out << "kind,parent,child,lambda,size\n";
    for (const ChildEvent& c : tree.children)
        out << "cluster," << c.parent << ',' << c.child << ',' << format_real(c.lambda) << ','
            << c.size << '\n';
    for (const PointEvent& p : tree.points)
        out << "point," << p.cluster << ',' << p.point << ',' << format_real(p.lambda) << ",1\n";
}

void write_labels_tsv(std::ostream& out, const Clustering& clustering) {
    out << "edge_id\tcluster_label\n";
    for (std::size_t e = 0; e < clustering.labels.size(); ++e)
        out << e << '\t' << clustering.labels[e] << '\n';
}

std::vector<std::int32_t> read_labels_tsv(std::istream& in, std::size_t edge_count) {
    std::vector<std::int32_t> labels(edge_count, outlier_label);
    std::vector<bool> seen(edge_count, false);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || (line_number == 1 && line.starts_with("edge_id")))
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(line_number, "expected edge_id<TAB>cluster_label");
        long long edge = 0;
        long long label = 0;
        try {
            std::size_t used = 0;
            edge = std::stoll(line.substr(0, tab), &used);
            if (used != tab)
                throw std::invalid_argument("edge");
            const std::string rest = line.substr(tab + 1);
            label = std::stoll(rest, &used);
            if (used != rest.size())
                throw std::invalid_argument("label");
        } catch (const std::logic_error&) {
            throw ParseError(line_number, "non-integer field in labels file");
        }
        if (edge < 0 || static_cast<std::size_t>(edge) >= edge_count)
            throw ParseError(line_number, "edge id out of range");
        if (label < outlier_label || label > std::numeric_limits<std::int32_t>::max())
            throw ParseError(line_number, "cluster label out of range");
        if (seen[static_cast<std::size_t>(edge)])
            throw ParseError(line_number, "edge listed twice");
        seen[static_cast<std::size_t>(edge)] = true;
        labels[static_cast<std::size_t>(edge)] = static_cast<std::int32_t>(label);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw InputError("labels file does not cover every edge");
    return labels;
}

void write_clusters_json(std::ostream& out, const Clustering& clustering) {
    out << "[";
    for (std::size_t n = 0; n < clustering.clusters.size(); ++n) {
        const ClusterInfo& c = clustering.clusters[n];
        out << (n ? ",\n " : "\n ") << "{\"id\": " << c.id << ", \"size\": " << c.size
            << ", \"stability\": " << format_real(c.stability) << "}";
    }
    out << (clustering.clusters.empty() ? "]\n" : "\n]\n");
}

Clustering clustering_from_labels(std::vector<std::int32_t> labels) {
    Clustering result;
    std::int32_t max_label = outlier_label;
    for (std::int32_t l : labels)
        max_label = std::max(max_label, l);
    result.clusters.resize(static_cast<std::size_t>(max_label + 1));
    for (std::size_t n = 0; n < result.clusters.size(); ++n)
        result.clusters[n].id = static_cast<std::int32_t>(n);
    for (std::int32_t l : labels)
        if (l != outlier_label)
            ++result.clusters[static_cast<std::size_t>(l)].size;
    result.labels = std::move(labels);
    return result;
}

}  // namespace hyperclust
