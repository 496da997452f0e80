#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcomplete/error.h"
#include "qcomplete/value.h"

namespace qcomplete {

struct ColumnRef {
  std::optional<std::string> qualifier;
  std::string column;

  friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

enum class CompareOp { Lt, Gt, Le, Ge, Eq, Ne, IsNull, IsNotNull };

const char* op_symbol(CompareOp op);
bool is_null_test(CompareOp op);

// lhs op rhs. When `or_null` is set the atom reads (lhs IS NULL OR lhs op rhs);
// this is how a split branch that absorbs NULLs is expressed in a conjunction.
struct Atom {
  ColumnRef lhs;
  CompareOp op = CompareOp::Eq;
  std::variant<std::monostate, ColumnRef, SqlValue> rhs;
  bool or_null = false;

  static Atom compare(ColumnRef lhs, CompareOp op, SqlValue value);
  static Atom compare(ColumnRef lhs, CompareOp op, ColumnRef other);
  static Atom null_test(ColumnRef lhs, bool negated);

  bool has_rhs() const { return !std::holds_alternative<std::monostate>(rhs); }

  friend bool operator==(const Atom&, const Atom&) = default;
};

using Conjunction = std::vector<Atom>;

struct QueryAst {
  // Empty optional means SELECT *.
  std::optional<std::vector<ColumnRef>> select;
  std::vector<std::string> from;
  Conjunction where;

  bool is_star() const { return !select.has_value(); }

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

// Parses the supported subset:
//   SELECT (* | col {, col}) FROM table {, table} [WHERE cond {AND cond}] [;]
// Throws Error(ParseError) with position/expected, or Error(Unsupported).
QueryAst parse(std::string_view text);

std::string render(const QueryAst& ast);
std::string render(const Atom& atom);
std::string render(const ColumnRef& ref);
std::string render(const SqlValue& value);

QueryAst strip_projection(const QueryAst& ast);

// Appends `c` after the existing WHERE atoms. Throws Error(EmptyConjunction).
QueryAst inject(const QueryAst& ast, const Conjunction& c);

struct ValidationIssue {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  // Throws the first issue as an Error.
  void require_ok() const;
};

ValidationReport validate_completable(const QueryAst& ast, const DatabaseSchema& schema);

}  // namespace qcomplete
