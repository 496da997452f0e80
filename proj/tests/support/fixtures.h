#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcomplete/engine.h"

namespace qctest {

using namespace qcomplete;

std::string data_path(const std::string& file);

// Employees from tests/data/employees.csv, registered as "Employees".
DatabaseSnapshot employees();

inline const char* kExampleQuery = "SELECT Gender, Salary FROM Employees";

// Cluster ids of the labelled Employees table, in file row order.
inline const std::vector<int> kEmployeeClusters = {2, 1, 2, 2, 3, 1, 2, 1, 1, 3};

DatabaseSnapshot snapshot_of(std::map<std::string, Relation, CaseInsensitiveLess> rels);
Relation relation_from_text(const std::string& csv);

// A random relation with up to `max_cols` columns and `max_rows` rows mixing
// numeric and text columns, duplicates and NULLs. Column names are drawn from a
// small pool so that cross products produce ambiguous names.
Relation random_relation(std::mt19937_64& rng, std::size_t max_cols, std::size_t max_rows);

struct RandomInstance {
  DatabaseSnapshot db;
  std::string sql;
  std::size_t k = 2;
  std::uint64_t seed = 0;
};

// One or two relations and a random valid conjunctive query over them.
RandomInstance random_instance(std::mt19937_64& rng);

// Random labelled rows for split and tree checks.
LabeledRows random_labeled_rows(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols, int classes);

}  // namespace qctest
