#pragma once

#include <json.hpp>

#include "qcomplete/engine.h"

namespace qcomplete {

using Json = nlohmann::json;

Json to_json(const SqlValue& v);
Json to_json(const ColumnSchema& c);
Json to_json(const Atom& a);
Json to_json(const ResultSet& rs);
Json to_json(const VerificationReport& report);
Json to_json(const Error& e);

// {name, rows, schema}
Json relation_summary(const std::string& name, const Relation& rel);
// {relations: [{name, columns, row_count}]}, sorted by name.
Json schema_json(const DatabaseSnapshot& db);

struct CompletionJsonOptions {
  bool timings = true;
};
Json to_json(const CompletionSet& cs, const CompletionJsonOptions& opts = {});

// Reads the optional tuning fields of a /complete request body or config
// object into `base`: seed, max_rows, and config {encode_categoricals,
// max_categorical_cardinality, drop_high_cardinality_text, max_iter, tol}.
// Throws Error(BadRequest) on wrongly typed fields.
EngineConfig engine_config_from_json(const Json& j, EngineConfig base = {});

}  // namespace qcomplete
