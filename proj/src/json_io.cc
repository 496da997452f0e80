#include "qcomplete/json_io.h"

#include <cmath>

namespace qcomplete {
namespace {

template <typename T>
T field(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' has the wrong type");
  }
}

std::size_t positive_field(const Json& j, const char* key, std::size_t fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' must be a non-negative integer");
  return it->get<std::size_t>();
}

}  // namespace

Json to_json(const SqlValue& v) {
  if (v.is_null()) return nullptr;
  if (v.is_text()) return v.as_text();
  double x = v.as_number();
  if (std::trunc(x) == x && std::fabs(x) < 9007199254740992.0) return static_cast<long long>(x);
  return x;
}

Json to_json(const ColumnSchema& c) {
  return {{"name", c.name}, {"type", type_name(c.type)}, {"nullable", c.nullable}};
}

Json to_json(const Atom& a) {
  Json j;
  j["column"] = render(a.lhs);
  j["op"] = op_symbol(a.op);
  if (const auto* col = std::get_if<ColumnRef>(&a.rhs))
    j["value"] = {{"column", render(*col)}};
  else if (const auto* val = std::get_if<SqlValue>(&a.rhs))
    j["value"] = to_json(*val);
  else
    j["value"] = nullptr;
  j["or_null"] = a.or_null;
  j["rendered"] = render(a);
  return j;
}

Json to_json(const ResultSet& rs) {
  Json cols = Json::array();
  for (const auto& c : rs.columns) {
    Json col = to_json(c.schema);
    col["table"] = c.table;
    cols.push_back(std::move(col));
  }
  Json rows = Json::array();
  for (const auto& row : rs.rows) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(to_json(v));
    rows.push_back(std::move(r));
  }
  return {{"columns", std::move(cols)}, {"rows", std::move(rows)}, {"truncated", rs.truncated}};
}

Json to_json(const VerificationReport& report) {
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    Json row = Json::array();
    for (const auto& v : w.row) row.push_back(to_json(v));
    witnesses.push_back({{"ordinal", w.ordinal}, {"row", std::move(row)}, {"completions", w.completions},
                         {"reason", w.reason}});
  }
  return {{"each_is_completion", report.each_is_completion},
          {"pairwise_disjoint", report.pairwise_disjoint},
          {"covers_original", report.covers_original},
          {"cover_limited_to_working_set", report.cover_limited_to_working_set},
          {"ok", report.ok()},
          {"witnesses", std::move(witnesses)}};
}

Json to_json(const Error& e) {
  Json detail = Json::object();
  if (e.position) detail["position"] = *e.position;
  if (!e.expected.empty()) detail["expected"] = e.expected;
  if (e.row) detail["row"] = *e.row;
  if (!e.column.empty()) detail["column"] = e.column;
  return {{"code", code_name(e.code())},
          {"message", e.what()},
          {"detail", detail.empty() ? Json(nullptr) : std::move(detail)}};
}

Json relation_summary(const std::string& name, const Relation& rel) {
  Json schema = Json::array();
  for (const auto& c : rel.schema) schema.push_back(to_json(c));
  return {{"name", name}, {"rows", rel.rows.size()}, {"schema", std::move(schema)}};
}

Json schema_json(const DatabaseSnapshot& db) {
  Json rels = Json::array();
  for (const auto& [name, rel] : db.relations()) {
    Json cols = Json::array();
    for (const auto& c : rel.schema) cols.push_back(to_json(c));
    rels.push_back({{"name", name}, {"columns", std::move(cols)}, {"row_count", rel.rows.size()}});
  }
  return {{"relations", std::move(rels)}, {"version", db.version()}};
}

Json to_json(const CompletionSet& cs, const CompletionJsonOptions& opts) {
  const std::size_t inherited = cs.original.where.size();
  Json completions = Json::array();
  for (const auto& c : cs.completions) {
    Json atoms = Json::array();
    for (const auto& a : c.conjunction) atoms.push_back(to_json(a));
    completions.push_back({{"rendered", c.rendered},
                           {"atoms", std::move(atoms)},
                           {"inherited_atom_count", inherited},
                           {"row_count", c.row_count},
                           {"leaf_class", c.leaf_class},
                           {"leaf_purity", c.leaf_purity}});
  }
  const auto& d = cs.diagnostics;
  Json diag = {{"truncated", d.truncated},
               {"insufficient_diversity", d.insufficient_diversity},
               {"working_rows", d.working_rows},
               {"max_rows", d.max_rows},
               {"inertia", d.inertia ? Json(*d.inertia) : Json(nullptr)},
               {"tree_depth", d.tree_depth}};
  if (opts.timings)
    diag["timings_ms"] = {{"evaluate", d.timings.evaluate_ms},
                          {"cluster", d.timings.cluster_ms},
                          {"tree", d.timings.tree_ms},
                          {"count", d.timings.count_ms}};
  return {{"original", render(cs.original)},
          {"k_requested", cs.k_requested},
          {"k_delivered", cs.k_delivered},
          {"completions", std::move(completions)},
          {"diagnostics", std::move(diag)}};
}

EngineConfig engine_config_from_json(const Json& j, EngineConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "expected a JSON object");
  base.seed = field<std::uint64_t>(j, "seed", base.seed);
  base.max_rows = positive_field(j, "max_rows", base.max_rows);
  if (auto it = j.find("config"); it != j.end() && !it->is_null()) {
    const Json& c = *it;
    if (!c.is_object()) throw Error(ErrorCode::BadRequest, "field 'config' must be an object");
    base.feature.encode_categoricals = field<bool>(c, "encode_categoricals", base.feature.encode_categoricals);
    base.feature.max_categorical_cardinality =
        positive_field(c, "max_categorical_cardinality", base.feature.max_categorical_cardinality);
    base.feature.drop_high_cardinality_text =
        field<bool>(c, "drop_high_cardinality_text", base.feature.drop_high_cardinality_text);
    base.kmeans.max_iter = positive_field(c, "max_iter", base.kmeans.max_iter);
    base.kmeans.tol = field<double>(c, "tol", base.kmeans.tol);
    base.max_rows = positive_field(c, "max_rows", base.max_rows);
  }
  return base;
}

}  // namespace qcomplete
