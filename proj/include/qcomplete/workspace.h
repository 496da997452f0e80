#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qcomplete/json_io.h"
#include "qcomplete/relation.h"

namespace qcomplete {

// A workspace directory holds one <name>.csv per relation, next to a
// <name>.schema.json sidecar {"name": ..., "columns": [{name, type, nullable}]}
// that pins the column types. CSVs without a sidecar get an inferred schema.

Json schema_to_json(const std::string& name, const std::vector<ColumnSchema>& schema);
// Throws Error(SchemaMismatch) on a malformed sidecar.
std::vector<ColumnSchema> schema_from_json(const Json& j);

void save_relation(const std::filesystem::path& dir, const std::string& name, const Relation& rel);

// Every relation in `dir`, keyed by the name recorded in its sidecar (or the
// file stem). A missing directory is an empty workspace.
std::map<std::string, Relation, CaseInsensitiveLess> load_workspace(const std::filesystem::path& dir);

}  // namespace qcomplete
