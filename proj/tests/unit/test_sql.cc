#include <doctest.h>

#include "fixtures.h"

using namespace qcomplete;

namespace {

ErrorCode code_of(const std::string& sql) {
  try {
    parse(sql);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error for " << sql);
  return ErrorCode::Internal;
}

Error error_of(const std::string& sql) {
  try {
    parse(sql);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error for " << sql);
  return Error(ErrorCode::Internal, "");
}

}  // namespace

TEST_CASE("parse the running example") {
  QueryAst q = parse("Select Gender, Salary\nFrom Employees");
  REQUIRE(q.select.has_value());
  CHECK(q.select->size() == 2);
  CHECK((*q.select)[0].column == "Gender");
  CHECK(q.from == std::vector<std::string>{"Employees"});
  CHECK(q.where.empty());
  CHECK(render(q) == "SELECT Gender, Salary FROM Employees");
}

TEST_CASE("parse a completion") {
  QueryAst q = parse("select Gender, Salary from Employees where commission < 6200 and sex = 'F';");
  REQUIRE(q.where.size() == 2);
  CHECK(q.where[0].op == CompareOp::Lt);
  CHECK(std::get<SqlValue>(q.where[0].rhs) == SqlValue::number(6200));
  CHECK(q.where[1].lhs.column == "sex");
  CHECK(std::get<SqlValue>(q.where[1].rhs) == SqlValue::text("F"));
}

TEST_CASE("operators and literals") {
  QueryAst q = parse("SELECT * FROM t WHERE a <= -1.5 AND b != 'it''s' AND c >= .5 AND d > 1e3 AND e IS NOT NULL "
                     "AND f IS NULL AND t.g = h AND i <> NULL");
  CHECK(q.is_star());
  REQUIRE(q.where.size() == 8);
  CHECK(std::get<SqlValue>(q.where[0].rhs) == SqlValue::number(-1.5));
  CHECK(q.where[1].op == CompareOp::Ne);
  CHECK(std::get<SqlValue>(q.where[1].rhs).as_text() == "it's");
  CHECK(std::get<SqlValue>(q.where[2].rhs) == SqlValue::number(0.5));
  CHECK(std::get<SqlValue>(q.where[3].rhs) == SqlValue::number(1000));
  CHECK(q.where[4].op == CompareOp::IsNotNull);
  CHECK(q.where[5].op == CompareOp::IsNull);
  CHECK(q.where[6].lhs.qualifier == "t");
  CHECK(std::get<ColumnRef>(q.where[6].rhs).column == "h");
  CHECK(std::get<SqlValue>(q.where[7].rhs).is_null());
  CHECK(render(q) ==
        "SELECT * FROM t WHERE a <= -1.5 AND b <> 'it''s' AND c >= 0.5 AND d > 1000 AND e IS NOT NULL AND f IS NULL "
        "AND t.g = h AND i <> NULL");
}

TEST_CASE("null-absorbing branch form") {
  QueryAst q = parse("SELECT * FROM t WHERE (a IS NULL OR a < 3) AND (b = 'x')");
  REQUIRE(q.where.size() == 2);
  CHECK(q.where[0].or_null);
  CHECK(q.where[0].op == CompareOp::Lt);
  CHECK_FALSE(q.where[1].or_null);
  CHECK(render(q) == "SELECT * FROM t WHERE (a IS NULL OR a < 3) AND b = 'x'");
  CHECK(code_of("SELECT * FROM t WHERE (a IS NULL OR b < 3)") == ErrorCode::Unsupported);
  CHECK(code_of("SELECT * FROM t WHERE (a < 3 OR a IS NULL)") == ErrorCode::Unsupported);
  CHECK(code_of("SELECT * FROM t WHERE (a IS NULL OR a IS NOT NULL)") == ErrorCode::Unsupported);
}

TEST_CASE("quoted identifiers round-trip") {
  QueryAst q = parse("SELECT \"order\", \"my col\" FROM \"select\" WHERE \"a\"\"b\" = 1");
  CHECK((*q.select)[0].column == "order");
  CHECK(q.from[0] == "select");
  CHECK(q.where[0].lhs.column == "a\"b");
  CHECK(parse(render(q)) == q);
  CHECK(render(q) == "SELECT \"order\", \"my col\" FROM \"select\" WHERE \"a\"\"b\" = 1");
}

TEST_CASE("parse errors report a position") {
  Error e = error_of("SELECT FROM Employees");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(e.position == 7u);
  CHECK(e.expected == "column name");

  e = error_of("SELECT * FROM Employees WHERE Salary >");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(e.position == 38u);

  CHECK(error_of("SELEC * FROM t").position == 0u);
  CHECK(code_of("SELECT * FROM t WHERE a = 'open") == ErrorCode::ParseError);
  CHECK(code_of("SELECT * FROM t WHERE a = 1 b") == ErrorCode::ParseError);
  CHECK(code_of("SELECT * FROM t, t") == ErrorCode::ParseError);
  CHECK(code_of("SELECT * FROM t WHERE") == ErrorCode::ParseError);
  CHECK(code_of("SELECT * FROM t WHERE a = 1a") == ErrorCode::ParseError);
  CHECK(code_of("SELECT * FROM t WHERE a ! 1") == ErrorCode::ParseError);
  CHECK(code_of("SELECT * FROM t WHERE a = 1.2.3") == ErrorCode::ParseError);
  CHECK(code_of("") == ErrorCode::ParseError);
}

TEST_CASE("unsupported constructs are named") {
  for (const char* sql : {
           "SELECT DISTINCT a FROM t",
           "SELECT COUNT(a) FROM t",
           "SELECT a AS b FROM t",
           "SELECT a b FROM t",
           "SELECT a + 1 FROM t",
           "SELECT * FROM t x",
           "SELECT * FROM t JOIN u ON t.a = u.a",
           "SELECT * FROM t WHERE a = 1 OR b = 2",
           "SELECT * FROM t WHERE NOT a = 1",
           "SELECT * FROM t WHERE a LIKE 'x%'",
           "SELECT * FROM t WHERE a IN (1, 2)",
           "SELECT * FROM t WHERE a BETWEEN 1 AND 2",
           "SELECT * FROM t WHERE a = (SELECT b FROM u)",
           "SELECT * FROM (SELECT * FROM t)",
           "SELECT * FROM t GROUP BY a",
           "SELECT * FROM t ORDER BY a",
           "SELECT * FROM t LIMIT 3",
           "SELECT * FROM t UNION SELECT * FROM u",
       }) {
    CAPTURE(sql);
    CHECK(code_of(sql) == ErrorCode::Unsupported);
  }
}

TEST_CASE("strip and inject") {
  QueryAst q = parse("SELECT Gender, Salary FROM Employees WHERE Salary > 40000");
  QueryAst stripped = strip_projection(q);
  CHECK(stripped.is_star());
  CHECK(stripped.where == q.where);

  Conjunction c = {Atom::compare({std::nullopt, "Commission"}, CompareOp::Ge, SqlValue::number(6200))};
  QueryAst done = inject(q, c);
  CHECK(done.select == q.select);
  REQUIRE(done.where.size() == 2);
  CHECK(done.where[0] == q.where[0]);
  CHECK(render(done) == "SELECT Gender, Salary FROM Employees WHERE Salary > 40000 AND Commission >= 6200");
  CHECK_THROWS_AS(inject(q, {}), Error);
}

TEST_CASE("validation against a schema") {
  DatabaseSchema schema = qctest::employees().schema();
  CHECK(validate_completable(parse("SELECT Gender FROM employees WHERE salary > 1"), schema).ok());
  CHECK(validate_completable(parse("SELECT Employees.Gender FROM Employees"), schema).ok());

  auto first_code = [&](const char* sql) { return validate_completable(parse(sql), schema).issues.at(0).code; };
  CHECK(first_code("SELECT * FROM Nope") == ErrorCode::UnknownTable);
  CHECK(first_code("SELECT Age FROM Employees") == ErrorCode::UnknownColumn);
  CHECK(first_code("SELECT Other.Gender FROM Employees") == ErrorCode::UnknownTable);
  CHECK(first_code("SELECT * FROM Employees WHERE Salary = 'high'") == ErrorCode::TypeMismatch);
  CHECK(first_code("SELECT * FROM Employees WHERE Gender < 3") == ErrorCode::TypeMismatch);
  CHECK(first_code("SELECT * FROM Employees WHERE Gender = Salary") == ErrorCode::TypeMismatch);
  CHECK(validate_completable(parse("SELECT * FROM Employees WHERE Salary = NULL"), schema).ok());

  // Employees and a second relation that shares a column name.
  auto rels = qctest::employees().relations();
  rels.emplace("Bonus", qctest::relation_from_text("EmpNo,Amount\ne10,5\n"));
  DatabaseSchema two = qctest::snapshot_of(rels).schema();
  CHECK(validate_completable(parse("SELECT EmpNo FROM Employees, Bonus"), two).issues.at(0).code ==
        ErrorCode::AmbiguousColumn);
  CHECK(validate_completable(parse("SELECT Bonus.EmpNo FROM Employees, Bonus"), two).ok());
  CHECK_THROWS_AS(validate_completable(parse("SELECT x FROM Employees"), schema).require_ok(), Error);
}
