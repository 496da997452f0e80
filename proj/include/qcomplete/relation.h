#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcomplete/value.h"

namespace qcomplete {

struct Relation {
  std::vector<ColumnSchema> schema;
  std::vector<Row> rows;

  // Index of the column named `name` (case-insensitive), if any.
  std::optional<std::size_t> column_index(std::string_view name) const;
  // Throws Error(SchemaMismatch/ValueParse) if a row or value violates the schema.
  void check() const;
};

// Immutable view of every registered relation at one version.
class DatabaseSnapshot {
 public:
  DatabaseSnapshot() = default;
  DatabaseSnapshot(std::map<std::string, Relation, CaseInsensitiveLess> relations, std::uint64_t version)
      : relations_(std::move(relations)), version_(version) {}

  std::uint64_t version() const { return version_; }
  const std::map<std::string, Relation, CaseInsensitiveLess>& relations() const { return relations_; }
  const Relation* find(std::string_view name) const;
  DatabaseSchema schema() const;

 private:
  std::map<std::string, Relation, CaseInsensitiveLess> relations_;
  std::uint64_t version_ = 0;
};

using SnapshotPtr = std::shared_ptr<const DatabaseSnapshot>;

// One CSV cell: nullopt for an unquoted empty field.
using CsvCell = std::optional<std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

// Comma separated, double-quote quoting with "" escapes, first record is the
// header. Accepts LF or CRLF line ends. Throws Error(RaggedRow) on width mismatch.
CsvTable parse_csv(std::string_view text);

std::vector<ColumnSchema> infer_schema(const std::vector<std::vector<CsvCell>>& rows,
                                       const std::vector<std::string>& header);

// Builds a typed relation, inferring the schema when none is given.
Relation relation_from_csv(const CsvTable& csv, const std::optional<std::vector<ColumnSchema>>& schema = std::nullopt);

std::string to_csv(const Relation& rel);

// Holds the current snapshot. Registration is serialized and publishes a new
// snapshot; readers keep whatever snapshot they already hold.
class RelationStore {
 public:
  RelationStore();

  SnapshotPtr snapshot() const;

  // Returns the new snapshot.
  SnapshotPtr put(const std::string& name, Relation rel);
  SnapshotPtr put_all(std::map<std::string, Relation, CaseInsensitiveLess> rels);

  Relation load_csv(const std::filesystem::path& path, const std::string& name,
                    const std::optional<std::vector<ColumnSchema>>& schema = std::nullopt);
  Relation load_csv_text(std::string_view text, const std::string& name,
                         const std::optional<std::vector<ColumnSchema>>& schema = std::nullopt);

 private:
  mutable std::mutex mu_;
  SnapshotPtr current_;
};

// Synthetic post-office data: Cities(city_ID, distance) and
// Packages(package_ID, destination, length, width, height, weight, price).
//
// Distributions (all drawn from one mt19937_64 stream, mapped by hand so the
// output is identical across standard libraries):
//   distance  uniform 1..500 km, integer
//   length    uniform 10..120 cm, width/height uniform 5..60 cm (one decimal)
//   weight    grams, grows with destination distance plus noise, ~0.7% above 9000
//   price     base on weight and distance; ~0.3% of packages form a distinct
//             high-price tall group; a handful of long (>140 cm) packages are overpriced
DatabaseSnapshot demo_packages(std::uint64_t seed, std::size_t city_count = 30, std::size_t package_count = 11000);

}  // namespace qcomplete
