#include <doctest.h>

#include <functional>
#include <thread>

#include "fixtures.h"

using namespace qcomplete;

namespace {

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorCode::Internal, "");
}

}  // namespace

TEST_CASE("employees csv") {
  DatabaseSnapshot db = qctest::employees();
  const Relation* emp = db.find("employees");
  REQUIRE(emp != nullptr);
  CHECK(emp->rows.size() == 10);
  REQUIRE(emp->schema.size() == 5);
  CHECK(emp->schema[0].type == ColumnType::Text);
  CHECK(emp->schema[2].type == ColumnType::Text);
  CHECK(emp->schema[3].name == "Salary");
  CHECK(emp->schema[3].type == ColumnType::Numeric);
  CHECK(emp->schema[4].type == ColumnType::Numeric);
  CHECK_FALSE(emp->schema[4].nullable);
  CHECK(emp->rows[1][4] == SqlValue::number(7400));
  CHECK(emp->column_index("commission") == 4u);
  CHECK_FALSE(emp->column_index("Age").has_value());
}

TEST_CASE("csv quoting and nulls") {
  CsvTable t = parse_csv("a,b,c\r\n\"x, y\",,\"\"\r\n\"say \"\"hi\"\"\",2,\"line\nbreak\"\n");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == std::optional<std::string>("x, y"));
  CHECK_FALSE(t.rows[0][1].has_value());
  CHECK(t.rows[0][2] == std::optional<std::string>(""));
  CHECK(t.rows[1][0] == std::optional<std::string>("say \"hi\""));
  CHECK(t.rows[1][2] == std::optional<std::string>("line\nbreak"));

  Relation rel = relation_from_csv(t);
  CHECK(rel.schema[1].type == ColumnType::Numeric);
  CHECK(rel.schema[1].nullable);
  CHECK(rel.rows[0][1].is_null());
  CHECK(rel.schema[2].type == ColumnType::Text);
  CHECK(rel.rows[0][2] == SqlValue::text(""));
}

TEST_CASE("blank lines") {
  CHECK(parse_csv("a,b\n1,2\n\n3,4\n").rows.size() == 2);
  CsvTable single = parse_csv("a\n1\n\n2\n");
  CHECK(single.rows.size() == 3);
  Relation rel = relation_from_csv(single);
  CHECK(rel.rows[1][0].is_null());
}

TEST_CASE("schema inference") {
  Relation rel = relation_from_csv(parse_csv("n,t,e,m\n1,x,,1\n2.5,y,,abc\n-3e2,10,,\n"));
  CHECK(rel.schema[0].type == ColumnType::Numeric);
  CHECK(rel.schema[1].type == ColumnType::Text);
  CHECK(rel.rows[2][1] == SqlValue::text("10"));
  CHECK(rel.schema[2].type == ColumnType::Text);
  CHECK(rel.schema[2].nullable);
  CHECK(rel.schema[3].type == ColumnType::Text);
  CHECK(rel.rows[2][0] == SqlValue::number(-300));
}

TEST_CASE("ingestion errors") {
  Error e = error_of([] { parse_csv("a,b\n1,2\n3\n"); });
  CHECK(e.code() == ErrorCode::RaggedRow);
  CHECK(e.row == 2u);
  CHECK(error_of([] { relation_from_csv(parse_csv("a,A\n1,2\n")); }).code() == ErrorCode::DuplicateHeader);
  CHECK(error_of([] { parse_csv(""); }).code() == ErrorCode::SchemaMismatch);
  CHECK(error_of([] { parse_csv("a,,c\n1,2,3\n"); }).code() == ErrorCode::SchemaMismatch);
  CHECK(error_of([] { parse_csv("a,b\n\"open,2\n"); }).code() == ErrorCode::RaggedRow);

  std::vector<ColumnSchema> schema = {{"a", ColumnType::Numeric, false}, {"b", ColumnType::Text, false}};
  e = error_of([&] { relation_from_csv(parse_csv("a,b\n1,x\nz,y\n"), schema); });
  CHECK(e.code() == ErrorCode::ValueParse);
  CHECK(e.row == 2u);
  CHECK(e.column == "a");
  CHECK(error_of([&] { relation_from_csv(parse_csv("a,b\n,x\n"), schema); }).code() == ErrorCode::ValueParse);
  CHECK(error_of([&] { relation_from_csv(parse_csv("a,c\n1,x\n"), schema); }).code() == ErrorCode::SchemaMismatch);
  CHECK(error_of([&] { relation_from_csv(parse_csv("a\n1\n"), schema); }).code() == ErrorCode::SchemaMismatch);
}

TEST_CASE("csv round trip") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    Relation rel = qctest::random_relation(rng, 6, 40);
    Relation back = relation_from_csv(parse_csv(to_csv(rel)), rel.schema);
    CHECK(back.rows == rel.rows);
  }
}

TEST_CASE("store snapshots are immutable") {
  RelationStore store;
  SnapshotPtr empty = store.snapshot();
  CHECK(empty->relations().empty());
  store.load_csv_text("a\n1\n2\n", "T");
  SnapshotPtr one = store.snapshot();
  CHECK(one->version() == empty->version() + 1);
  store.load_csv_text("a\n1\n", "t");
  SnapshotPtr two = store.snapshot();
  CHECK(two->relations().size() == 1);
  CHECK(two->find("T")->rows.size() == 1);
  CHECK(one->find("T")->rows.size() == 2);
  CHECK(empty->relations().empty());
  CHECK_THROWS_AS(store.load_csv("/nonexistent/file.csv", "x"), Error);
  CHECK_THROWS_AS(store.put("", Relation{}), Error);
}

TEST_CASE("concurrent registration publishes every relation") {
  RelationStore store;
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&store, i] {
      for (int j = 0; j < 20; ++j) store.load_csv_text("a\n" + std::to_string(j) + "\n", "r" + std::to_string(i));
    });
  for (auto& t : threads) t.join();
  SnapshotPtr s = store.snapshot();
  CHECK(s->relations().size() == 8);
  CHECK(s->version() == 160);
}

TEST_CASE("demo packages") {
  DatabaseSnapshot db = demo_packages(1, 30, 11000);
  const Relation* cities = db.find("Cities");
  const Relation* packages = db.find("Packages");
  REQUIRE(cities);
  REQUIRE(packages);
  CHECK(cities->rows.size() == 30);
  CHECK(packages->rows.size() == 11000);
  CHECK(packages->schema.size() == 7);
  std::size_t heavy = 0;
  for (const auto& row : packages->rows) {
    CHECK(row[1].as_number() >= 1);
    CHECK(row[1].as_number() <= 30);
    heavy += row[5].as_number() > 9000;
  }
  // Roughly 0.7% of packages are above 9 kg.
  CHECK(heavy > 40);
  CHECK(heavy < 120);
  for (const auto& row : cities->rows) {
    CHECK(row[1].as_number() >= 1);
    CHECK(row[1].as_number() <= 500);
  }
  CHECK(demo_packages(1, 30, 200).find("Packages")->rows == demo_packages(1, 30, 200).find("Packages")->rows);
  CHECK(demo_packages(1, 30, 200).find("Packages")->rows != demo_packages(2, 30, 200).find("Packages")->rows);
}
