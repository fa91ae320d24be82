#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperclust {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class TimeUnit { Seconds, Days, Months };

std::optional<TimeUnit> parse_time_unit(std::string_view text);
std::string_view to_string(TimeUnit unit);

struct Hyperedge {
    // Explicit record id from the input, when one was given.
    std::optional<std::string> id;
    // Position of the record in the original input (0-based, counting every record).
    std::size_t source_index = 0;
    // Sorted, duplicate-free.
    std::vector<VertexId> members;
    // Numeric time. NaN while `raw_time` still holds an unparsed timestamp.
    double time = 0.0;
    // Date text awaiting normalize_times(); empty once the time is numeric.
    std::string raw_time;
    // First label is the primary category (e.g. "math.at").
    std::vector<std::string> labels;
};

// Immutable temporal hypergraph with a vertex -> incident-edge index.
//
// The per-vertex edge lists are ordered by (time, edge id); edges whose time
// is still pending normalization order after every numeric time.
class TemporalHypergraph {
public:
    TemporalHypergraph() = default;

    // Members are sorted and de-duplicated; out-of-range member ids and
    // repeated vertex names are rejected with InputError.
    TemporalHypergraph(std::vector<std::string> vertex_names, std::vector<Hyperedge> edges);

    std::size_t vertex_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const Hyperedge& edge(EdgeId e) const { return edges_.at(e); }
    std::span<const Hyperedge> edges() const noexcept { return edges_; }

    const std::string& vertex_name(VertexId v) const { return names_.at(v); }
    std::span<const std::string> vertex_names() const noexcept { return names_; }
    std::optional<VertexId> find_vertex(std::string_view name) const;

    std::span<const EdgeId> incident_edges(VertexId v) const;

    // True when every edge carries a numeric time.
    bool has_numeric_times() const noexcept;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, VertexId> name_index_;
    std::vector<Hyperedge> edges_;
    std::vector<std::size_t> incidence_offsets_;
    std::vector<EdgeId> incidence_;
};

// NFC normalization, lowercasing and surrounding-whitespace trimming.
std::string normalize_name(std::string_view name);

// Parses "YYYY-MM-DD" with an optional "THH:MM[:SS[.fff]]" part and an
// optional "Z" / "+HH:MM" suffix. Returns seconds since 1970-01-01T00:00Z.
std::optional<double> parse_timestamp(std::string_view text);

struct CleanReport {
    std::size_t removed_vertices = 0;
    std::size_t removed_edges = 0;
};

struct CleanResult {
    TemporalHypergraph graph;
    CleanReport report;
};

// Drops every vertex whose normalized name starts with `prefix`, then every
// edge left without members. Survivors are re-indexed densely in order.
CleanResult clean_authors(const TemporalHypergraph& graph, std::string_view prefix = "n/a");

// Rewrites every time as the elapsed amount of `unit` since the earliest edge.
// Numeric input times are taken to be in `unit` already and are only shifted.
TemporalHypergraph normalize_times(const TemporalHypergraph& graph, TimeUnit unit);

std::size_t degree(const TemporalHypergraph& graph, VertexId v);
std::map<std::size_t, std::size_t> edge_size_histogram(const TemporalHypergraph& graph);
// Bin k counts the edges with floor(t / bin_width) == k.
std::map<std::int64_t, std::size_t> edge_time_histogram(const TemporalHypergraph& graph,
                                                        double bin_width);

}  // namespace hyperclust
