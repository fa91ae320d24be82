#pragma once

#include "hyperclust/error.hpp"
#include "hyperclust/hypergraph.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperclust {

// Missing or mistyped field in an otherwise well-formed record.
class SchemaError : public ParseError {
public:
    using ParseError::ParseError;
};

class DuplicateIdError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

// One JSON object per line:
//   {"id": "...", "members": ["a", "b"], "time": "2018-01-31" | 30.0, "labels": ["math.at"]}
// `id` and `labels` are optional; unknown keys are ignored; blank lines are skipped.
// Vertex names are normalized and interned in first-appearance order.
TemporalHypergraph parse_jsonl(std::istream& in);

// Two-file form. edges.csv has header `id,time,labels` with labels separated
// by ';'; incidence.csv has header `edge_id,member`.
TemporalHypergraph parse_csv(std::istream& edges_csv, std::istream& incidence_csv);

// Same schema as parse_jsonl. Numeric times are written with 12 significant digits.
void write_jsonl(std::ostream& out, const TemporalHypergraph& graph);

// `edge<TAB>source_index<TAB>id` per edge, joining dense ids to input records.
void write_id_map(std::ostream& out, const TemporalHypergraph& graph);

// Splits one CSV line into fields; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_number);

// printf("%.12g"); every output file formats reals this way.
std::string format_real(double value);

}  // namespace hyperclust
