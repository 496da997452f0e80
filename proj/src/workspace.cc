#include "qcomplete/workspace.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qcomplete {
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

Json schema_to_json(const std::string& name, const std::vector<ColumnSchema>& schema) {
  Json cols = Json::array();
  for (const auto& c : schema) cols.push_back(to_json(c));
  return {{"name", name}, {"columns", std::move(cols)}};
}

std::vector<ColumnSchema> schema_from_json(const Json& j) {
  auto bad = [] { return Error(ErrorCode::SchemaMismatch, "malformed schema sidecar"); };
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array()) throw bad();
  std::vector<ColumnSchema> out;
  for (const auto& c : j["columns"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string() || !c.contains("type")) throw bad();
    ColumnSchema s;
    s.name = c["name"].get<std::string>();
    std::string type = c["type"].is_string() ? c["type"].get<std::string>() : "";
    if (type == "numeric")
      s.type = ColumnType::Numeric;
    else if (type == "text")
      s.type = ColumnType::Text;
    else
      throw bad();
    s.nullable = c.value("nullable", true);
    out.push_back(std::move(s));
  }
  return out;
}

void save_relation(const fs::path& dir, const std::string& name, const Relation& rel) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / (name + ".csv"), to_csv(rel));
  write_file(dir / (name + ".schema.json"), schema_to_json(name, rel.schema).dump(2) + "\n");
}

std::map<std::string, Relation, CaseInsensitiveLess> load_workspace(const fs::path& dir) {
  std::map<std::string, Relation, CaseInsensitiveLess> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;

  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") csvs.push_back(entry.path());
  std::sort(csvs.begin(), csvs.end());

  for (const auto& csv : csvs) {
    std::string name = csv.stem().string();
    std::optional<std::vector<ColumnSchema>> schema;
    fs::path sidecar = dir / (name + ".schema.json");
    if (fs::exists(sidecar)) {
      Json j;
      try {
        j = Json::parse(read_file(sidecar));
      } catch (const nlohmann::json::parse_error&) {
        throw Error(ErrorCode::SchemaMismatch, "malformed schema sidecar " + sidecar.string());
      }
      schema = schema_from_json(j);
      if (j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
    }
    try {
      out.insert_or_assign(name, relation_from_csv(parse_csv(read_file(csv)), schema));
    } catch (const Error& e) {
      Error wrapped(e.code(), csv.filename().string() + ": " + e.what());
      wrapped.row = e.row;
      wrapped.column = e.column;
      throw wrapped;
    }
  }
  return out;
}

}  // namespace qcomplete
