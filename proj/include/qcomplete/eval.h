#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomplete/error.h"
#include "qcomplete/relation.h"
#include "qcomplete/sql.h"

namespace qcomplete {

inline constexpr std::size_t kDefaultMaxRows = 100000;

struct ResultColumn {
  std::string table;
  ColumnSchema schema;

  friend bool operator==(const ResultColumn&, const ResultColumn&) = default;
};

struct ResultSet {
  std::vector<ResultColumn> columns;
  std::vector<Row> rows;
  // lineage[i][t] is the row index, within the t-th FROM relation, that
  // contributed to rows[i]. It identifies a result row independently of its
  // values, so containment and disjointness are checked on identity.
  std::vector<std::vector<std::size_t>> lineage;
  bool truncated = false;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

// Binds a conjunction against a column list. Resolution follows the SQL
// rules used by validate_completable: qualifiers match table names, and an
// unqualified name must match exactly one column.
class RowFilter {
 public:
  RowFilter(const Conjunction& conj, std::span<const ResultColumn> columns);

  bool matches(const Row& row) const;

 private:
  struct Bound {
    std::size_t lhs;
    CompareOp op;
    std::optional<std::size_t> rhs_col;
    SqlValue rhs_val;
    bool or_null;
  };
  std::vector<Bound> atoms_;
};

std::size_t resolve_column(const ColumnRef& ref, std::span<const ResultColumn> columns);

// Three-valued comparison collapsed to bool: anything compared with NULL is
// false, only the null tests (and the or_null form) match NULL.
bool eval_atom(CompareOp op, const SqlValue& lhs, const SqlValue& rhs, bool or_null = false);

// Filters the cross product of the FROM relations (first table outermost),
// then projects. Emits at most max_rows rows; `truncated` is set when at least
// one qualifying row was dropped by the cap.
ResultSet evaluate(const QueryAst& ast, const DatabaseSnapshot& db, std::optional<std::size_t> max_rows = std::nullopt,
                   const Deadline* deadline = nullptr);

std::size_t count(const QueryAst& ast, const DatabaseSnapshot& db);

}  // namespace qcomplete
