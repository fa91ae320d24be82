#include "hyperclust/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace hyperclust {

namespace {

using nlohmann::json;

class VertexInterner {
public:
    VertexId intern(std::string_view raw) {
        std::string name = normalize_name(raw);
        auto [it, inserted] = index_.try_emplace(name, static_cast<VertexId>(names_.size()));
        if (inserted)
            names_.push_back(std::move(name));
        return it->second;
    }

    std::vector<std::string> release() { return std::move(names_); }

private:
    std::unordered_map<std::string, VertexId> index_;
    std::vector<std::string> names_;
};

void set_time_from_json(Hyperedge& edge, const json& value, std::size_t line) {
    if (value.is_number()) {
        edge.time = value.get<double>();
        if (!std::isfinite(edge.time))
            throw SchemaError(line, "non-finite time");
    } else if (value.is_string()) {
        edge.raw_time = value.get<std::string>();
        edge.time = std::nan("");
        if (edge.raw_time.empty())
            throw SchemaError(line, "empty time string");
    } else {
        throw SchemaError(line, "field 'time' must be a date string or a number");
    }
}

void set_time_from_text(Hyperedge& edge, const std::string& text, std::size_t line) {
    if (text.empty())
        throw SchemaError(line, "missing time");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(value)) {
        edge.time = value;
    } else {
        edge.raw_time = text;
        edge.time = std::nan("");
    }
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

TemporalHypergraph parse_jsonl(std::istream& in) {
    VertexInterner vertices;
    std::vector<Hyperedge> edges;
    std::unordered_set<std::string> seen_ids;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;

        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(line_number, std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object())
            throw SchemaError(line_number, "record is not a JSON object");

        Hyperedge edge;
        edge.source_index = edges.size();

        if (auto it = record.find("id"); it != record.end() && !it->is_null()) {
            std::string id = it->is_string() ? it->get<std::string>() : it->dump();
            if (!seen_ids.insert(id).second)
                throw DuplicateIdError(line_number, "duplicate id '" + id + "'");
            edge.id = std::move(id);
        }

        auto members = record.find("members");
        if (members == record.end())
            throw SchemaError(line_number, "missing field 'members'");
        if (!members->is_array())
            throw SchemaError(line_number, "field 'members' must be an array");
        for (const json& m : *members) {
            if (!m.is_string())
                throw SchemaError(line_number, "members must be strings");
            edge.members.push_back(vertices.intern(m.get_ref<const std::string&>()));
        }

        auto time = record.find("time");
        if (time == record.end() || time->is_null())
            throw SchemaError(line_number, "missing field 'time'");
        set_time_from_json(edge, *time, line_number);

        if (auto labels = record.find("labels"); labels != record.end() && !labels->is_null()) {
            if (!labels->is_array())
                throw SchemaError(line_number, "field 'labels' must be an array");
            for (const json& l : *labels) {
                if (!l.is_string())
                    throw SchemaError(line_number, "labels must be strings");
                edge.labels.push_back(l.get<std::string>());
            }
        }
        edges.push_back(std::move(edge));
    }
    return TemporalHypergraph(vertices.release(), std::move(edges));
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_number) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    field.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (quoted)
        throw ParseError(line_number, "unterminated quoted field");
    fields.push_back(was_quoted ? field : trim(field));
    return fields;
}

TemporalHypergraph parse_csv(std::istream& edges_csv, std::istream& incidence_csv) {
    std::vector<Hyperedge> edges;
    std::unordered_map<std::string, EdgeId> edge_index;

    std::string line;
    std::size_t line_number = 0;
    bool header = true;
    while (std::getline(edges_csv, line)) {
        ++line_number;
        if (trim(line).empty())
            continue;
        auto fields = split_csv_line(line, line_number);
        if (header) {
            if (fields.size() < 2 || fields[0] != "id" || fields[1] != "time")
                throw SchemaError(line_number, "edges.csv header must be 'id,time,labels'");
            header = false;
            continue;
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw SchemaError(line_number, "edges.csv rows need 2 or 3 fields");
        Hyperedge edge;
        edge.source_index = edges.size();
        if (fields[0].empty())
            throw SchemaError(line_number, "empty edge id");
        if (!edge_index.emplace(fields[0], static_cast<EdgeId>(edges.size())).second)
            throw DuplicateIdError(line_number, "duplicate id '" + fields[0] + "'");
        edge.id = fields[0];
        set_time_from_text(edge, fields[1], line_number);
        if (fields.size() == 3) {
            std::size_t start = 0;
            const std::string& labels = fields[2];
            while (start <= labels.size()) {
                auto end = labels.find(';', start);
                if (end == std::string::npos)
                    end = labels.size();
                std::string label = trim(labels.substr(start, end - start));
                if (!label.empty())
                    edge.labels.push_back(std::move(label));
                start = end + 1;
            }
        }
        edges.push_back(std::move(edge));
    }

    VertexInterner vertices;
    line_number = 0;
    header = true;
    while (std::getline(incidence_csv, line)) {
        ++line_number;
        if (trim(line).empty())
            continue;
        auto fields = split_csv_line(line, line_number);
        if (header) {
            if (fields.size() != 2 || fields[0] != "edge_id" || fields[1] != "member")
                throw SchemaError(line_number, "incidence.csv header must be 'edge_id,member'");
            header = false;
            continue;
        }
        if (fields.size() != 2)
            throw SchemaError(line_number, "incidence.csv rows need 2 fields");
        auto it = edge_index.find(fields[0]);
        if (it == edge_index.end())
            throw SchemaError(line_number, "unknown edge id '" + fields[0] + "'");
        edges[it->second].members.push_back(vertices.intern(fields[1]));
    }
    return TemporalHypergraph(vertices.release(), std::move(edges));
}

void write_jsonl(std::ostream& out, const TemporalHypergraph& graph) {
    for (const Hyperedge& e : graph.edges()) {
        // Insertion order keeps the key order stable: id, members, time, labels.
        nlohmann::ordered_json record;
        if (e.id)
            record["id"] = *e.id;
        auto& members = record["members"] = nlohmann::ordered_json::array();
        for (VertexId v : e.members)
            members.push_back(graph.vertex_name(v));
        if (!e.raw_time.empty())
            record["time"] = e.raw_time;
        else
            record["time"] = nlohmann::ordered_json::parse(format_real(e.time));
        if (!e.labels.empty())
            record["labels"] = e.labels;
        out << record.dump() << '\n';
    }
}

void write_id_map(std::ostream& out, const TemporalHypergraph& graph) {
    out << "edge\tsource_index\tid\n";
    for (EdgeId k = 0; k < graph.edge_count(); ++k) {
        const Hyperedge& e = graph.edge(k);
        out << k << '\t' << e.source_index << '\t' << e.id.value_or("") << '\n';
    }
}

std::string format_real(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

}  // namespace hyperclust
