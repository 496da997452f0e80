#include "fixtures.h"

#include <algorithm>

#ifndef QC_TEST_DATA_DIR
#define QC_TEST_DATA_DIR "tests/data"
#endif

namespace qctest {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

const std::vector<std::string> kNamePool = {"a", "b", "c", "d", "e", "f", "g", "h", "id", "x", "Y", "z"};
const std::vector<std::string> kTextPool = {"F", "M", "O'Brien", "", "x y", "Zo\xc3\xab", "alpha", "Alpha",
                                            "beta", "a,b", "\"q\"", "null", "10", "select"};

SqlValue random_number(std::mt19937_64& rng, int style) {
  switch (style) {
    case 0:
      return SqlValue::number(static_cast<double>(pick(rng, 0, 5)));
    case 1:
      return SqlValue::number(static_cast<double>(pick(rng, 0, 1000)));
    case 2:
      return SqlValue::number(static_cast<double>(pick(rng, 0, 200)) / 10.0 - 5.0);
    case 3:
      return SqlValue::number(std::uniform_real_distribution<double>(-1e6, 1e6)(rng));
    default:
      return SqlValue::number(static_cast<double>(pick(rng, 1, 9)) * (coin(rng, 0.5) ? 1e-7 : 1e22));
  }
}

}  // namespace

std::string data_path(const std::string& file) { return std::string(QC_TEST_DATA_DIR) + "/" + file; }

DatabaseSnapshot employees() {
  RelationStore store;
  store.load_csv(data_path("employees.csv"), "Employees");
  return *store.snapshot();
}

DatabaseSnapshot snapshot_of(std::map<std::string, Relation, CaseInsensitiveLess> rels) {
  RelationStore store;
  return *store.put_all(std::move(rels));
}

Relation relation_from_text(const std::string& csv) { return relation_from_csv(parse_csv(csv)); }

Relation random_relation(std::mt19937_64& rng, std::size_t max_cols, std::size_t max_rows) {
  std::size_t ncols = pick(rng, 1, max_cols);
  std::size_t nrows = pick(rng, 1, max_rows);
  std::vector<std::string> names = kNamePool;
  std::shuffle(names.begin(), names.end(), rng);

  Relation rel;
  struct Gen {
    bool numeric;
    int style;
    double null_rate;
    std::vector<std::string> texts;
  };
  std::vector<Gen> gens;
  for (std::size_t c = 0; c < ncols; ++c) {
    Gen g;
    g.numeric = coin(rng, 0.6);
    g.style = static_cast<int>(pick(rng, 0, 4));
    g.null_rate = coin(rng, 0.4) ? 0.15 : 0.0;
    if (!g.numeric) {
      if (coin(rng, 0.2)) {
        for (std::size_t i = 0; i < nrows; ++i) g.texts.push_back("r" + std::to_string(i));
      } else {
        g.texts = kTextPool;
        std::shuffle(g.texts.begin(), g.texts.end(), rng);
        g.texts.resize(pick(rng, 1, 6));
      }
    }
    bool nullable = g.null_rate > 0 || coin(rng, 0.2);
    rel.schema.push_back({names[c], g.numeric ? ColumnType::Numeric : ColumnType::Text, nullable});
    gens.push_back(std::move(g));
  }
  for (std::size_t r = 0; r < nrows; ++r) {
    Row row;
    for (const auto& g : gens) {
      if (g.null_rate > 0 && coin(rng, g.null_rate))
        row.push_back(SqlValue::null());
      else if (g.numeric)
        row.push_back(random_number(rng, g.style));
      else
        row.push_back(SqlValue::text(g.texts[pick(rng, 0, g.texts.size() - 1)]));
    }
    rel.rows.push_back(std::move(row));
  }
  return rel;
}

RandomInstance random_instance(std::mt19937_64& rng) {
  std::map<std::string, Relation, CaseInsensitiveLess> rels;
  std::vector<std::string> from;
  if (coin(rng, 0.25)) {
    rels.emplace("r", random_relation(rng, 6, 30));
    rels.emplace("s", random_relation(rng, 3, 7));
    from = {"r", "s"};
  } else {
    rels.emplace("t", random_relation(rng, 8, 200));
    from = {"t"};
  }

  struct Col {
    std::string table;
    ColumnSchema schema;
    const Relation* rel;
    std::size_t index;
  };
  std::vector<Col> cols;
  for (const auto& t : from) {
    const Relation& rel = rels.at(t);
    for (std::size_t c = 0; c < rel.schema.size(); ++c) cols.push_back({t, rel.schema[c], &rel, c});
  }
  auto ref = [&](const Col& col) {
    std::size_t same = 0;
    for (const auto& o : cols) same += iequals(o.schema.name, col.schema.name);
    ColumnRef out;
    out.column = col.schema.name;
    if (same > 1 || coin(rng, 0.3)) out.qualifier = col.table;
    return out;
  };

  QueryAst ast;
  ast.from = from;
  if (!coin(rng, 0.4)) {
    std::vector<ColumnRef> select;
    std::size_t n = pick(rng, 1, std::min<std::size_t>(3, cols.size()));
    for (std::size_t i = 0; i < n; ++i) select.push_back(ref(cols[pick(rng, 0, cols.size() - 1)]));
    ast.select = std::move(select);
  }

  std::size_t atoms = pick(rng, 0, 2);
  for (std::size_t i = 0; i < atoms; ++i) {
    const Col& col = cols[pick(rng, 0, cols.size() - 1)];
    double roll = std::uniform_real_distribution<double>(0, 1)(rng);
    if (roll < 0.1) {
      ast.where.push_back(Atom::null_test(ref(col), coin(rng, 0.7)));
      continue;
    }
    static const CompareOp ops[] = {CompareOp::Lt, CompareOp::Le, CompareOp::Gt,
                                    CompareOp::Ge, CompareOp::Eq, CompareOp::Ne};
    CompareOp op = ops[pick(rng, 0, 5)];
    if (roll < 0.2) {
      std::vector<const Col*> same;
      for (const auto& o : cols)
        if (o.schema.type == col.schema.type) same.push_back(&o);
      ast.where.push_back(Atom::compare(ref(col), op, ref(*same[pick(rng, 0, same.size() - 1)])));
      continue;
    }
    const SqlValue& sample = col.rel->rows[pick(rng, 0, col.rel->rows.size() - 1)][col.index];
    SqlValue value = sample;
    if (value.is_null())
      value = col.schema.type == ColumnType::Numeric ? SqlValue::number(1) : SqlValue::text("F");
    ast.where.push_back(Atom::compare(ref(col), op, value));
  }

  RandomInstance inst;
  inst.db = snapshot_of(std::move(rels));
  inst.sql = render(ast);
  inst.k = pick(rng, 2, 5);
  inst.seed = rng();
  return inst;
}

LabeledRows random_labeled_rows(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols, int classes) {
  LabeledRows out;
  std::size_t ncols = pick(rng, 1, max_cols);
  std::size_t nrows = pick(rng, 2, max_rows);
  std::vector<double> null_rate;
  for (std::size_t c = 0; c < ncols; ++c) {
    bool numeric = coin(rng, 0.6);
    null_rate.push_back(coin(rng, 0.3) ? 0.15 : 0.0);
    out.columns.push_back({"t", {"c" + std::to_string(c), numeric ? ColumnType::Numeric : ColumnType::Text,
                                 null_rate.back() > 0}});
  }
  for (std::size_t r = 0; r < nrows; ++r) {
    Row row;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (null_rate[c] > 0 && coin(rng, null_rate[c]))
        row.push_back(SqlValue::null());
      else if (out.columns[c].schema.type == ColumnType::Numeric)
        row.push_back(SqlValue::number(static_cast<double>(pick(rng, 0, 9))));
      else
        row.push_back(SqlValue::text(kTextPool[pick(rng, 0, 5)]));
    }
    out.rows.push_back(std::move(row));
    out.labels.push_back(static_cast<int>(pick(rng, 0, static_cast<std::size_t>(classes - 1))));
  }
  return out;
}

}  // namespace qctest
