#include "iormon/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "iormon/errors.hpp"

namespace iormon {

using nlohmann::json;
using nlohmann::ordered_json;

StreamFormat parse_format(std::string_view text) {
  if (text == "csv") return StreamFormat::kCsv;
  if (text == "jsonl") return StreamFormat::kJsonl;
  throw ConfigError("unknown format '" + std::string(text) + "' (expected csv or jsonl)");
}

namespace {

double json_bound(const json& col, const char* key, double fallback) {
  if (!col.contains(key) || col[key].is_null()) return fallback;
  if (!col[key].is_number()) throw SchemaError(std::string("bound '") + key + "' must be a number");
  return col[key].get<double>();
}

std::string token_of(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

Schema parse_schema(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
    throw SchemaError("schema needs a \"columns\" array");
  }
  std::vector<Column> columns;
  for (const json& c : doc["columns"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
      throw SchemaError("every column needs a string \"name\"");
    }
    Column col{.name = c["name"].get<std::string>()};
    const std::string kind = c.value("kind", std::string("numeric"));
    if (kind == "numeric") {
      col.kind = ColumnKind::kNumeric;
      col.lower = json_bound(c, "lower", -std::numeric_limits<double>::infinity());
      col.upper = json_bound(c, "upper", std::numeric_limits<double>::infinity());
    } else if (kind == "categorical") {
      col.kind = ColumnKind::kCategorical;
      if (!c.contains("values") || !c["values"].is_array()) {
        throw SchemaError("categorical column '" + col.name + "' needs a \"values\" array");
      }
      for (const json& v : c["values"]) col.categories.push_back(token_of(v));
    } else if (kind == "ignored") {
      col.kind = ColumnKind::kIgnored;
    } else {
      throw SchemaError("column '" + col.name + "' has unknown kind '" + kind + "'");
    }
    columns.push_back(std::move(col));
  }
  return Schema(std::move(columns), doc.value("label", std::string("label")));
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

std::string schema_to_json(const Schema& schema) {
  ordered_json doc;
  doc["label"] = schema.label_column();
  doc["columns"] = ordered_json::array();
  for (const Column& c : schema.columns()) {
    ordered_json col;
    col["name"] = c.name;
    switch (c.kind) {
      case ColumnKind::kNumeric:
        col["kind"] = "numeric";
        if (std::isfinite(c.lower)) col["lower"] = c.lower;
        if (std::isfinite(c.upper)) col["upper"] = c.upper;
        break;
      case ColumnKind::kCategorical:
        col["kind"] = "categorical";
        col["values"] = c.categories;
        break;
      case ColumnKind::kIgnored:
        col["kind"] = "ignored";
        break;
    }
    doc["columns"].push_back(std::move(col));
  }
  return doc.dump(2) + "\n";
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv(std::string_view line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw IngestError("unterminated quoted field", lineno);
  fields.emplace_back(trim(cur));
  return fields;
}

double parse_number(std::string_view text, const Column& col, std::size_t lineno) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || std::isnan(value)) {
    throw IngestError("column '" + col.name + "': '" + std::string(text) + "' is not a number",
                      lineno);
  }
  return value;
}

double category_value(const Schema& schema, std::size_t c, const std::string& token,
                      std::size_t lineno) {
  try {
    return static_cast<double>(schema.category_index(c, token));
  } catch (const SchemaError& e) {
    throw IngestError(e.what(), lineno);
  }
}

std::vector<DecisionPoint> ingest_csv(std::istream& in, const Schema& schema) {
  std::vector<DecisionPoint> out;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> field_of(schema.dimension());
  std::size_t label_field = 0;
  std::size_t width = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line, lineno);
    if (!have_header) {
      auto locate = [&](const std::string& name) {
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (fields[f] == name) return f;
        }
        throw IngestError("header is missing column '" + name + "'", lineno);
      };
      for (std::size_t c = 0; c < schema.dimension(); ++c) field_of[c] = locate(schema.column(c).name);
      label_field = locate(schema.label_column());
      width = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != width) {
      throw IngestError("expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()),
                        lineno);
    }
    DecisionPoint p{.id = out.size(), .features = std::vector<double>(schema.dimension(), 0.0),
                    .label = fields[label_field]};
    for (std::size_t c = 0; c < schema.dimension(); ++c) {
      const Column& col = schema.column(c);
      const std::string& raw = fields[field_of[c]];
      if (col.kind == ColumnKind::kNumeric) {
        p.features[c] = parse_number(raw, col, lineno);
      } else if (col.kind == ColumnKind::kCategorical) {
        p.features[c] = category_value(schema, c, raw, lineno);
      }
    }
    out.push_back(std::move(p));
  }
  if (!have_header) throw IngestError("missing CSV header", lineno + 1);
  return out;
}

std::vector<DecisionPoint> ingest_jsonl(std::istream& in, const Schema& schema) {
  std::vector<DecisionPoint> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IngestError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!rec.is_object() || !rec.contains("features") || !rec["features"].is_array()) {
      throw IngestError("record needs a \"features\" array", lineno);
    }
    if (!rec.contains("label") || rec["label"].is_null()) {
      throw IngestError("record needs a \"label\"", lineno);
    }
    const json& feats = rec["features"];
    if (feats.size() != schema.dimension()) {
      throw IngestError("expected " + std::to_string(schema.dimension()) + " features, found " +
                            std::to_string(feats.size()),
                        lineno);
    }
    DecisionPoint p{.id = out.size(), .features = std::vector<double>(schema.dimension(), 0.0),
                    .label = token_of(rec["label"])};
    for (std::size_t c = 0; c < schema.dimension(); ++c) {
      const Column& col = schema.column(c);
      if (col.kind == ColumnKind::kNumeric) {
        if (!feats[c].is_number()) {
          throw IngestError("column '" + col.name + "': " + feats[c].dump() + " is not a number",
                            lineno);
        }
        p.features[c] = feats[c].get<double>();
      } else if (col.kind == ColumnKind::kCategorical) {
        p.features[c] = category_value(schema, c, token_of(feats[c]), lineno);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

ordered_json features_json(const Schema& schema, const DecisionPoint& p) {
  ordered_json feats = ordered_json::array();
  for (std::size_t c = 0; c < schema.dimension(); ++c) {
    const Column& col = schema.column(c);
    if (col.kind == ColumnKind::kCategorical) {
      feats.push_back(col.categories.at(static_cast<std::size_t>(p.features[c])));
    } else if (col.kind == ColumnKind::kNumeric) {
      feats.push_back(p.features[c]);
    } else {
      feats.push_back(nullptr);
    }
  }
  return feats;
}

}  // namespace

std::vector<DecisionPoint> ingest(std::istream& in, StreamFormat format, const Schema& schema) {
  return format == StreamFormat::kCsv ? ingest_csv(in, schema) : ingest_jsonl(in, schema);
}

std::vector<DecisionPoint> ingest_file(const std::filesystem::path& path, StreamFormat format,
                                       const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string(), 0);
  return ingest(in, format, schema);
}

void write_points(std::ostream& out, StreamFormat format, const Schema& schema,
                  std::span<const DecisionPoint> points) {
  if (format == StreamFormat::kCsv) {
    for (const Column& c : schema.columns()) out << csv_field(c.name) << ',';
    out << csv_field(schema.label_column()) << '\n';
    for (const DecisionPoint& p : points) {
      for (std::size_t c = 0; c < schema.dimension(); ++c) {
        const Column& col = schema.column(c);
        if (col.kind == ColumnKind::kCategorical) {
          out << csv_field(col.categories.at(static_cast<std::size_t>(p.features[c])));
        } else if (col.kind == ColumnKind::kNumeric) {
          out << format_double(p.features[c]);
        }
        out << ',';
      }
      out << csv_field(p.label) << '\n';
    }
    return;
  }
  for (const DecisionPoint& p : points) {
    ordered_json rec;
    rec["features"] = features_json(schema, p);
    rec["label"] = p.label;
    out << rec.dump() << '\n';
  }
}

std::string report_line(const WitnessReport& report, const Schema& schema,
                        std::span<const DecisionPoint* const> witnesses) {
  ordered_json rec;
  rec["id"] = report.query_id;
  rec["witnesses"] = report.witness_ids;
  rec["count"] = report.witness_ids.size();
  if (!witnesses.empty()) {
    ordered_json decisions = ordered_json::array();
    for (const DecisionPoint* w : witnesses) {
      ordered_json d;
      d["id"] = w->id;
      d["features"] = features_json(schema, *w);
      d["label"] = w->label;
      decisions.push_back(std::move(d));
    }
    rec["decisions"] = std::move(decisions);
  }
  return rec.dump();
}

}  // namespace iormon
