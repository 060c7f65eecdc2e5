#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iormon/decision.hpp"
#include "iormon/schema.hpp"

namespace iormon {

enum class StreamFormat { kCsv, kJsonl };

StreamFormat parse_format(std::string_view text);

// Schema file:
//   {"label": "label",
//    "columns": [{"name": "age", "kind": "numeric", "lower": 0, "upper": 120},
//                {"name": "sex", "kind": "categorical", "values": ["f", "m"]},
//                {"name": "race", "kind": "ignored"}]}
// Numeric bounds are optional; "label" defaults to "label".
Schema parse_schema(std::string_view json_text);
Schema load_schema(const std::filesystem::path& path);
std::string schema_to_json(const Schema& schema);

// Reads decisions in file order and numbers them 0, 1, 2, ...
//
// CSV needs a header naming every schema column and the label column (other
// columns are skipped). JSONL lines are objects with a "features" array in
// schema order and a "label". Errors carry the 1-based line number.
std::vector<DecisionPoint> ingest(std::istream& in, StreamFormat format, const Schema& schema);
std::vector<DecisionPoint> ingest_file(const std::filesystem::path& path, StreamFormat format,
                                       const Schema& schema);

void write_points(std::ostream& out, StreamFormat format, const Schema& schema,
                  std::span<const DecisionPoint> points);

// Shortest round-trip decimal form.
std::string format_double(double value);

// One JSONL report record: {"id":..,"witnesses":[..],"count":..}, plus a
// "decisions" array echoing the witnesses when `witnesses` is non-empty.
std::string report_line(const WitnessReport& report, const Schema& schema,
                        std::span<const DecisionPoint* const> witnesses = {});

}  // namespace iormon
