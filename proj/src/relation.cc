#include "qcomplete/relation.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "qcomplete/error.h"

namespace qcomplete {

std::optional<std::size_t> Relation::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (iequals(schema[i].name, name)) return i;
  return std::nullopt;
}

void Relation::check() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size())
      throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(r + 1) + " has " +
                                                 std::to_string(rows[r].size()) + " values, schema has " +
                                                 std::to_string(schema.size()));
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const SqlValue& v = rows[r][c];
      bool ok = v.is_null() ? schema[c].nullable
                            : (schema[c].type == ColumnType::Numeric ? v.is_number() : v.is_text());
      if (!ok) {
        Error err(ErrorCode::ValueParse, "value at row " + std::to_string(r + 1) + ", column " + schema[c].name +
                                             " does not fit " + type_name(schema[c].type) +
                                             (schema[c].nullable ? "" : " not null"));
        err.row = r + 1;
        err.column = schema[c].name;
        throw err;
      }
    }
  }
}

const Relation* DatabaseSnapshot::find(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

DatabaseSchema DatabaseSnapshot::schema() const {
  DatabaseSchema out;
  for (const auto& [name, rel] : relations_) out.emplace(name, rel.schema);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<CsvCell>> records;
  std::vector<CsvCell> record;
  std::string field;
  bool quoted = false;     // current field was quoted
  bool in_quotes = false;  // currently inside quotes
  bool field_started = false;

  auto end_field = [&] {
    if (quoted || !field.empty())
      record.emplace_back(field);
    else
      record.emplace_back(std::nullopt);
    field.clear();
    quoted = false;
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF; the LF ends the record
    } else if (c == '\n') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) throw Error(ErrorCode::RaggedRow, "unterminated quoted field at end of input");
  if (field_started || !record.empty()) end_record();

  CsvTable out;
  if (records.empty()) throw Error(ErrorCode::SchemaMismatch, "CSV has no header row");
  for (auto& cell : records.front()) {
    if (!cell || cell->empty()) throw Error(ErrorCode::SchemaMismatch, "CSV header has an empty column name");
    out.header.push_back(*cell);
  }
  for (auto it = records.begin() + 1; it != records.end(); ++it) {
    // Blank lines are skipped unless the relation has a single column, where
    // they stand for a NULL row.
    bool blank = it->size() == 1 && !it->front().has_value();
    if (blank && out.header.size() > 1) continue;
    out.rows.push_back(std::move(*it));
  }
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    if (out.rows[r].size() != out.header.size()) {
      Error err(ErrorCode::RaggedRow, "row " + std::to_string(r + 1) + " has " + std::to_string(out.rows[r].size()) +
                                          " fields, header has " + std::to_string(out.header.size()));
      err.row = r + 1;
      throw err;
    }
  }
  return out;
}

std::vector<ColumnSchema> infer_schema(const std::vector<std::vector<CsvCell>>& rows,
                                       const std::vector<std::string>& header) {
  if (header.empty()) throw Error(ErrorCode::SchemaMismatch, "header is empty");
  std::set<std::string, CaseInsensitiveLess> seen;
  for (const auto& h : header)
    if (!seen.insert(h).second) {
      Error err(ErrorCode::DuplicateHeader, "duplicate column name " + h);
      err.column = h;
      throw err;
    }

  std::vector<ColumnSchema> out;
  for (std::size_t c = 0; c < header.size(); ++c) out.push_back({header[c], ColumnType::Numeric, false});
  std::vector<bool> any_value(header.size(), false);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      Error err(ErrorCode::RaggedRow, "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                          " fields, header has " + std::to_string(header.size()));
      err.row = r + 1;
      throw err;
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      const CsvCell& cell = rows[r][c];
      if (!cell) {
        out[c].nullable = true;
        continue;
      }
      any_value[c] = true;
      if (out[c].type == ColumnType::Numeric && !parse_number(*cell)) out[c].type = ColumnType::Text;
    }
  }
  for (std::size_t c = 0; c < header.size(); ++c)
    if (!any_value[c]) out[c].type = ColumnType::Text;
  return out;
}

Relation relation_from_csv(const CsvTable& csv, const std::optional<std::vector<ColumnSchema>>& schema) {
  Relation rel;
  if (schema) {
    if (schema->size() != csv.header.size())
      throw Error(ErrorCode::SchemaMismatch, "schema has " + std::to_string(schema->size()) + " columns, CSV has " +
                                                 std::to_string(csv.header.size()));
    for (std::size_t c = 0; c < schema->size(); ++c)
      if (!iequals((*schema)[c].name, csv.header[c]))
        throw Error(ErrorCode::SchemaMismatch,
                    "schema column " + (*schema)[c].name + " does not match CSV header " + csv.header[c]);
    rel.schema = *schema;
  } else {
    rel.schema = infer_schema(csv.rows, csv.header);
  }

  rel.rows.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& in = csv.rows[r];
    if (in.size() != rel.schema.size()) {
      Error err(ErrorCode::RaggedRow, "row " + std::to_string(r + 1) + " has wrong width");
      err.row = r + 1;
      throw err;
    }
    Row row;
    row.reserve(in.size());
    for (std::size_t c = 0; c < in.size(); ++c) {
      const ColumnSchema& col = rel.schema[c];
      auto fail = [&](const std::string& why) {
        Error err(ErrorCode::ValueParse, "row " + std::to_string(r + 1) + ", column " + col.name + ": " + why);
        err.row = r + 1;
        err.column = col.name;
        throw err;
      };
      if (!in[c]) {
        if (!col.nullable) fail("empty value in non-nullable column");
        row.push_back(SqlValue::null());
      } else if (col.type == ColumnType::Numeric) {
        auto v = parse_number(*in[c]);
        if (!v) fail("'" + *in[c] + "' is not a number");
        row.push_back(SqlValue::number(*v));
      } else {
        row.push_back(SqlValue::text(*in[c]));
      }
    }
    rel.rows.push_back(std::move(row));
  }
  return rel;
}

namespace {

std::string csv_field(const std::string& s) {
  bool needs = s.empty() || s.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string to_csv(const Relation& rel) {
  std::string out;
  for (std::size_t c = 0; c < rel.schema.size(); ++c) {
    if (c) out.push_back(',');
    out += csv_field(rel.schema[c].name);
  }
  out.push_back('\n');
  for (const auto& row : rel.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      const SqlValue& v = row[c];
      if (v.is_number()) out += format_number(v.as_number());
      else if (v.is_text()) out += csv_field(v.as_text());
    }
    out.push_back('\n');
  }
  return out;
}

RelationStore::RelationStore() : current_(std::make_shared<const DatabaseSnapshot>()) {}

SnapshotPtr RelationStore::snapshot() const {
  std::lock_guard lock(mu_);
  return current_;
}

SnapshotPtr RelationStore::put(const std::string& name, Relation rel) {
  std::map<std::string, Relation, CaseInsensitiveLess> one;
  one.emplace(name, std::move(rel));
  return put_all(std::move(one));
}

SnapshotPtr RelationStore::put_all(std::map<std::string, Relation, CaseInsensitiveLess> rels) {
  for (const auto& [name, rel] : rels) {
    if (name.empty()) throw Error(ErrorCode::BadRequest, "relation name must not be empty");
    rel.check();
  }
  std::lock_guard lock(mu_);
  auto relations = current_->relations();
  for (auto& [name, rel] : rels) {
    relations.erase(name);
    relations.emplace(name, std::move(rel));
  }
  current_ = std::make_shared<const DatabaseSnapshot>(std::move(relations), current_->version() + 1);
  return current_;
}

Relation RelationStore::load_csv(const std::filesystem::path& path, const std::string& name,
                                 const std::optional<std::vector<ColumnSchema>>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_csv_text(buf.str(), name, schema);
}

Relation RelationStore::load_csv_text(std::string_view text, const std::string& name,
                                      const std::optional<std::vector<ColumnSchema>>& schema) {
  Relation rel = relation_from_csv(parse_csv(text), schema);
  put(name, rel);
  return rel;
}

namespace {

class DemoRng {
 public:
  explicit DemoRng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

double round_to(double v, double step) { return std::round(v / step) * step; }
double round1(double v) { return std::round(v * 10.0) / 10.0; }
double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

DatabaseSnapshot demo_packages(std::uint64_t seed, std::size_t city_count, std::size_t package_count) {
  DemoRng rng(seed);
  Relation cities;
  cities.schema = {{"city_ID", ColumnType::Numeric, false}, {"distance", ColumnType::Numeric, false}};
  std::vector<double> distance;
  for (std::size_t i = 0; i < city_count; ++i) {
    double d = static_cast<double>(rng.uniform_int(1, 500));
    distance.push_back(d);
    cities.rows.push_back({SqlValue::number(static_cast<double>(i + 1)), SqlValue::number(d)});
  }

  Relation packages;
  packages.schema = {{"package_ID", ColumnType::Numeric, false}, {"destination", ColumnType::Numeric, false},
                     {"length", ColumnType::Numeric, false},     {"width", ColumnType::Numeric, false},
                     {"height", ColumnType::Numeric, false},     {"weight", ColumnType::Numeric, false},
                     {"price", ColumnType::Numeric, false}};
  for (std::size_t i = 0; i < package_count && city_count > 0; ++i) {
    auto dest = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(city_count) - 1));
    double dist = distance[dest];
    double length = round1(rng.uniform(10, 120));
    double width = round1(rng.uniform(5, 60));
    double height = round1(rng.uniform(5, 60));
    double weight = std::max(50.0, round_to(300.0 + 8.0 * dist + 600.0 * rng.normal(), 1.0));
    double kind = rng.uniform();
    if (kind < 0.0066) weight = round_to(rng.uniform(9001, 12000), 1.0);
    double price = round2(std::max(1.0, 2.0 + 0.0015 * weight + 0.01 * dist + 0.8 * rng.normal()));
    if (kind >= 0.0066 && kind < 0.0096) {
      height = round1(rng.uniform(80, 100));
      price = round2(rng.uniform(80, 100));
    } else if (kind >= 0.0096 && kind < 0.0100) {
      length = round1(rng.uniform(141, 160));
      price = round2(price * 3.0 + 20.0);
    }
    packages.rows.push_back({SqlValue::number(static_cast<double>(i + 1)),
                             SqlValue::number(static_cast<double>(dest + 1)), SqlValue::number(length),
                             SqlValue::number(width), SqlValue::number(height), SqlValue::number(weight),
                             SqlValue::number(price)});
  }

  std::map<std::string, Relation, CaseInsensitiveLess> rels;
  rels.emplace("Cities", std::move(cities));
  rels.emplace("Packages", std::move(packages));
  return DatabaseSnapshot(std::move(rels), 1);
}

}  // namespace qcomplete
