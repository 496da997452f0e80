#include "qcomplete/eval.h"

#include <algorithm>

namespace qcomplete {

std::size_t resolve_column(const ColumnRef& ref, std::span<const ResultColumn> columns) {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (ref.qualifier && !iequals(*ref.qualifier, columns[i].table)) continue;
    if (!iequals(ref.column, columns[i].schema.name)) continue;
    if (hit) throw Error(ErrorCode::AmbiguousColumn, "ambiguous column " + render(ref));
    hit = i;
  }
  if (!hit) throw Error(ErrorCode::UnknownColumn, "unknown column " + render(ref));
  return *hit;
}

bool eval_atom(CompareOp op, const SqlValue& lhs, const SqlValue& rhs, bool or_null) {
  if (op == CompareOp::IsNull) return lhs.is_null();
  if (op == CompareOp::IsNotNull) return !lhs.is_null();
  if (lhs.is_null()) return or_null;
  if (rhs.is_null()) return false;

  int cmp;
  if (lhs.is_number() && rhs.is_number()) {
    double a = lhs.as_number(), b = rhs.as_number();
    cmp = a < b ? -1 : (a > b ? 1 : 0);
  } else if (lhs.is_text() && rhs.is_text()) {
    int c = lhs.as_text().compare(rhs.as_text());
    cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
  } else {
    return false;
  }
  switch (op) {
    case CompareOp::Lt: return cmp < 0;
    case CompareOp::Gt: return cmp > 0;
    case CompareOp::Le: return cmp <= 0;
    case CompareOp::Ge: return cmp >= 0;
    case CompareOp::Eq: return cmp == 0;
    case CompareOp::Ne: return cmp != 0;
    default: return false;
  }
}

RowFilter::RowFilter(const Conjunction& conj, std::span<const ResultColumn> columns) {
  for (const auto& atom : conj) {
    Bound b{resolve_column(atom.lhs, columns), atom.op, std::nullopt, SqlValue::null(), atom.or_null};
    if (const auto* col = std::get_if<ColumnRef>(&atom.rhs)) b.rhs_col = resolve_column(*col, columns);
    if (const auto* val = std::get_if<SqlValue>(&atom.rhs)) b.rhs_val = *val;
    atoms_.push_back(std::move(b));
  }
}

bool RowFilter::matches(const Row& row) const {
  for (const auto& b : atoms_) {
    const SqlValue& rhs = b.rhs_col ? row[*b.rhs_col] : b.rhs_val;
    if (!eval_atom(b.op, row[b.lhs], rhs, b.or_null)) return false;
  }
  return true;
}

namespace {

// Which FROM tables an atom touches.
std::vector<std::size_t> atom_tables(const Atom& atom, std::span<const ResultColumn> columns,
                                     const std::vector<std::size_t>& table_of_column) {
  std::vector<std::size_t> out{table_of_column[resolve_column(atom.lhs, columns)]};
  if (const auto* col = std::get_if<ColumnRef>(&atom.rhs)) {
    std::size_t t = table_of_column[resolve_column(*col, columns)];
    if (t != out.front()) out.push_back(t);
  }
  return out;
}

}  // namespace

ResultSet evaluate(const QueryAst& ast, const DatabaseSnapshot& db, std::optional<std::size_t> max_rows,
                   const Deadline* deadline) {
  if (max_rows && *max_rows == 0) throw Error(ErrorCode::BadRequest, "max_rows must be positive");
  validate_completable(ast, db.schema()).require_ok();

  std::vector<const Relation*> rels;
  std::vector<ResultColumn> all_columns;
  std::vector<std::size_t> table_of_column;
  std::vector<std::size_t> offsets;
  for (std::size_t t = 0; t < ast.from.size(); ++t) {
    const Relation* rel = db.find(ast.from[t]);
    rels.push_back(rel);
    offsets.push_back(all_columns.size());
    for (const auto& col : rel->schema) {
      all_columns.push_back({ast.from[t], col});
      table_of_column.push_back(t);
    }
  }

  // Single-table atoms filter their relation before the cross product; the
  // surviving row indices stay in ascending order, so output order is unchanged.
  std::vector<Conjunction> local(ast.from.size());
  Conjunction residual;
  for (const auto& atom : ast.where) {
    auto tables = atom_tables(atom, all_columns, table_of_column);
    if (tables.size() == 1)
      local[tables.front()].push_back(atom);
    else
      residual.push_back(atom);
  }

  std::vector<std::vector<std::size_t>> candidates(rels.size());
  for (std::size_t t = 0; t < rels.size(); ++t) {
    std::span<const ResultColumn> cols(all_columns.data() + offsets[t], rels[t]->schema.size());
    RowFilter filter(local[t], cols);
    for (std::size_t r = 0; r < rels[t]->rows.size(); ++r)
      if (filter.matches(rels[t]->rows[r])) candidates[t].push_back(r);
  }

  ResultSet out;
  std::vector<std::size_t> projection;
  if (ast.is_star()) {
    out.columns = all_columns;
    for (std::size_t i = 0; i < all_columns.size(); ++i) projection.push_back(i);
  } else {
    for (const auto& ref : *ast.select) {
      std::size_t idx = resolve_column(ref, all_columns);
      projection.push_back(idx);
      out.columns.push_back(all_columns[idx]);
    }
  }

  if (std::any_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.empty(); })) return out;

  RowFilter residual_filter(residual, all_columns);
  std::vector<std::size_t> pos(rels.size(), 0);
  Row combined(all_columns.size());
  std::size_t steps = 0;
  while (true) {
    if (deadline && (++steps & 0xFFF) == 0) deadline->check();
    for (std::size_t t = 0; t < rels.size(); ++t) {
      const Row& src = rels[t]->rows[candidates[t][pos[t]]];
      std::copy(src.begin(), src.end(), combined.begin() + static_cast<std::ptrdiff_t>(offsets[t]));
    }
    if (residual_filter.matches(combined)) {
      if (max_rows && out.rows.size() == *max_rows) {
        out.truncated = true;
        break;
      }
      Row projected;
      projected.reserve(projection.size());
      for (std::size_t idx : projection) projected.push_back(combined[idx]);
      out.rows.push_back(std::move(projected));
      std::vector<std::size_t> lineage(rels.size());
      for (std::size_t t = 0; t < rels.size(); ++t) lineage[t] = candidates[t][pos[t]];
      out.lineage.push_back(std::move(lineage));
    }
    // Odometer increment, last table fastest.
    std::size_t t = rels.size();
    while (t > 0) {
      --t;
      if (++pos[t] < candidates[t].size()) break;
      pos[t] = 0;
      if (t == 0) return out;
    }
  }
  return out;
}

std::size_t count(const QueryAst& ast, const DatabaseSnapshot& db) { return evaluate(ast, db).size(); }

}  // namespace qcomplete
