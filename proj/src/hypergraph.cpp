#include "hyperclust/hypergraph.hpp"

#include "hyperclust/error.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace hyperclust {

namespace {

constexpr double seconds_per_day = 86400.0;
// Mean Gregorian month.
constexpr double seconds_per_month = 30.436875 * seconds_per_day;

double seconds_per_unit(TimeUnit unit) {
    switch (unit) {
    case TimeUnit::Seconds: return 1.0;
    case TimeUnit::Days: return seconds_per_day;
    case TimeUnit::Months: return seconds_per_month;
    }
    return 1.0;
}

double sort_time(const Hyperedge& e) {
    return std::isnan(e.time) ? std::numeric_limits<double>::infinity() : e.time;
}

template <typename T>
bool read_digits(std::string_view text, std::size_t& pos, std::size_t count, T& out) {
    if (pos + count > text.size())
        return false;
    for (std::size_t k = 0; k < count; ++k)
        if (text[pos + k] < '0' || text[pos + k] > '9')
            return false;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, out);
    if (ec != std::errc{})
        return false;
    pos += count;
    return true;
}

bool expect(std::string_view text, std::size_t& pos, char c) {
    if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

}  // namespace

std::optional<TimeUnit> parse_time_unit(std::string_view text) {
    if (text == "seconds")
        return TimeUnit::Seconds;
    if (text == "days")
        return TimeUnit::Days;
    if (text == "months")
        return TimeUnit::Months;
    return std::nullopt;
}

std::string_view to_string(TimeUnit unit) {
    switch (unit) {
    case TimeUnit::Seconds: return "seconds";
    case TimeUnit::Days: return "days";
    case TimeUnit::Months: return "months";
    }
    return "days";
}

TemporalHypergraph::TemporalHypergraph(std::vector<std::string> vertex_names,
                                       std::vector<Hyperedge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
    if (names_.size() > std::numeric_limits<VertexId>::max() ||
        edges_.size() > std::numeric_limits<EdgeId>::max())
        throw InputError("hypergraph too large for 32-bit ids");

    name_index_.reserve(names_.size());
    for (VertexId v = 0; v < names_.size(); ++v) {
        if (!name_index_.emplace(names_[v], v).second)
            throw InputError("duplicate vertex name '" + names_[v] + "'");
    }

    std::vector<std::size_t> counts(names_.size() + 1, 0);
    for (auto& e : edges_) {
        std::sort(e.members.begin(), e.members.end());
        e.members.erase(std::unique(e.members.begin(), e.members.end()), e.members.end());
        if (!e.members.empty() && e.members.back() >= names_.size())
            throw InputError("edge member id out of range");
        for (VertexId v : e.members)
            ++counts[v + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    incidence_offsets_ = counts;
    incidence_.resize(incidence_offsets_.back());
    std::vector<std::size_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
    for (EdgeId e = 0; e < edges_.size(); ++e)
        for (VertexId v : edges_[e].members)
            incidence_[cursor[v]++] = e;

    // Edge ids were appended in increasing order, so a stable sort on time
    // yields (time, id) order.
    for (VertexId v = 0; v < names_.size(); ++v) {
        auto first = incidence_.begin() + static_cast<std::ptrdiff_t>(incidence_offsets_[v]);
        auto last = incidence_.begin() + static_cast<std::ptrdiff_t>(incidence_offsets_[v + 1]);
        std::stable_sort(first, last, [this](EdgeId a, EdgeId b) {
            return sort_time(edges_[a]) < sort_time(edges_[b]);
        });
    }
}

std::optional<VertexId> TemporalHypergraph::find_vertex(std::string_view name) const {
    auto it = name_index_.find(std::string(name));
    if (it == name_index_.end())
        return std::nullopt;
    return it->second;
}

std::span<const EdgeId> TemporalHypergraph::incident_edges(VertexId v) const {
    if (v >= names_.size())
        throw ParameterError("unknown vertex id " + std::to_string(v));
    return std::span<const EdgeId>(incidence_).subspan(
        incidence_offsets_[v], incidence_offsets_[v + 1] - incidence_offsets_[v]);
}

bool TemporalHypergraph::has_numeric_times() const noexcept {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Hyperedge& e) { return e.raw_time.empty(); });
}

std::string normalize_name(std::string_view name) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status))
        throw Error("ICU NFC normalizer unavailable");

    icu::UnicodeString text = icu::UnicodeString::fromUTF8(
        icu::StringPiece(name.data(), static_cast<int32_t>(name.size())));
    text.toLower(icu::Locale::getRoot());
    icu::UnicodeString normalized = nfc->normalize(text, status);
    if (U_FAILURE(status))
        throw InputError("cannot normalize name");
    normalized.trim();

    std::string out;
    normalized.toUTF8String(out);
    return out;
}

std::optional<double> parse_timestamp(std::string_view text) {
    using namespace std::chrono;

    std::size_t pos = 0;
    int y = 0;
    unsigned mo = 0, d = 0;
    if (!read_digits(text, pos, 4, y) || !expect(text, pos, '-') ||
        !read_digits(text, pos, 2, mo) || !expect(text, pos, '-') ||
        !read_digits(text, pos, 2, d))
        return std::nullopt;
    year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok())
        return std::nullopt;
    double seconds = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * seconds_per_day;

    if (pos == text.size())
        return seconds;
    if (text[pos] != 'T' && text[pos] != ' ')
        return std::nullopt;
    ++pos;

    int hh = 0, mm = 0, ss = 0;
    if (!read_digits(text, pos, 2, hh) || !expect(text, pos, ':') || !read_digits(text, pos, 2, mm))
        return std::nullopt;
    double frac = 0.0;
    if (expect(text, pos, ':')) {
        if (!read_digits(text, pos, 2, ss))
            return std::nullopt;
        if (expect(text, pos, '.')) {
            std::size_t start = pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
                ++pos;
            if (pos == start)
                return std::nullopt;
            std::string digits = "0." + std::string(text.substr(start, pos - start));
            frac = std::stod(digits);
        }
    }
    if (hh > 23 || mm > 59 || ss > 60)
        return std::nullopt;
    seconds += hh * 3600.0 + mm * 60.0 + ss + frac;

    if (pos == text.size())
        return seconds;
    if (text[pos] == 'Z' && pos + 1 == text.size())
        return seconds;
    if (text[pos] == '+' || text[pos] == '-') {
        const double sign = text[pos] == '+' ? 1.0 : -1.0;
        ++pos;
        int oh = 0, om = 0;
        if (!read_digits(text, pos, 2, oh) || !expect(text, pos, ':') ||
            !read_digits(text, pos, 2, om) || pos != text.size() || oh > 23 || om > 59)
            return std::nullopt;
        return seconds - sign * (oh * 3600.0 + om * 60.0);
    }
    return std::nullopt;
}

CleanResult clean_authors(const TemporalHypergraph& graph, std::string_view prefix) {
    if (prefix.empty())
        throw ParameterError("clean prefix must be non-empty");
    const std::string needle = normalize_name(prefix);

    constexpr VertexId removed = std::numeric_limits<VertexId>::max();
    std::vector<VertexId> remap(graph.vertex_count(), removed);
    std::vector<std::string> names;
    CleanReport report;
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        const std::string& name = graph.vertex_name(v);
        if (name.starts_with(needle)) {
            ++report.removed_vertices;
            continue;
        }
        remap[v] = static_cast<VertexId>(names.size());
        names.push_back(name);
    }

    std::vector<Hyperedge> edges;
    edges.reserve(graph.edge_count());
    for (const Hyperedge& e : graph.edges()) {
        Hyperedge kept = e;
        kept.members.clear();
        for (VertexId v : e.members)
            if (remap[v] != removed)
                kept.members.push_back(remap[v]);
        if (kept.members.empty()) {
            ++report.removed_edges;
            continue;
        }
        edges.push_back(std::move(kept));
    }
    return {TemporalHypergraph(std::move(names), std::move(edges)), report};
}

TemporalHypergraph normalize_times(const TemporalHypergraph& graph, TimeUnit unit) {
    std::vector<Hyperedge> edges(graph.edges().begin(), graph.edges().end());
    const double scale = seconds_per_unit(unit);

    bool any_raw = false;
    bool any_numeric = false;
    for (const Hyperedge& e : edges)
        (e.raw_time.empty() ? any_numeric : any_raw) = true;
    if (any_raw && any_numeric)
        throw InputError("input mixes numeric times and date timestamps");

    for (std::size_t k = 0; k < edges.size(); ++k) {
        Hyperedge& e = edges[k];
        if (!e.raw_time.empty()) {
            auto seconds = parse_timestamp(e.raw_time);
            if (!seconds)
                throw InputError("edge " + std::to_string(k) + " (record " +
                                 std::to_string(e.source_index) + "): unparseable timestamp '" +
                                 e.raw_time + "'");
            e.time = *seconds / scale;
            e.raw_time.clear();
        }
        if (!std::isfinite(e.time))
            throw InputError("edge " + std::to_string(k) + ": non-finite time");
    }

    if (!edges.empty()) {
        const double earliest =
            std::min_element(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
                return a.time < b.time;
            })->time;
        for (Hyperedge& e : edges)
            e.time -= earliest;
    }
    std::vector<std::string> names(graph.vertex_names().begin(), graph.vertex_names().end());
    return TemporalHypergraph(std::move(names), std::move(edges));
}

std::size_t degree(const TemporalHypergraph& graph, VertexId v) {
    return graph.incident_edges(v).size();
}

std::map<std::size_t, std::size_t> edge_size_histogram(const TemporalHypergraph& graph) {
    std::map<std::size_t, std::size_t> histogram;
    for (const Hyperedge& e : graph.edges())
        ++histogram[e.members.size()];
    return histogram;
}

std::map<std::int64_t, std::size_t> edge_time_histogram(const TemporalHypergraph& graph,
                                                        double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw ParameterError("time histogram bin width must be positive");
    std::map<std::int64_t, std::size_t> histogram;
    for (const Hyperedge& e : graph.edges()) {
        if (std::isnan(e.time))
            throw InputError("time histogram requires normalized times");
        ++histogram[static_cast<std::int64_t>(std::floor(e.time / bin_width))];
    }
    return histogram;
}

}  // namespace hyperclust
