#include <doctest.h>

#include <cmath>
#include <functional>

#include "fixtures.h"
#include "oracles.h"

using namespace qcomplete;

namespace {

LabeledRows employees_labeled() {
  ResultSet rs = evaluate(parse("SELECT * FROM Employees"), qctest::employees());
  return assign_labels(rs, qctest::kEmployeeClusters);
}

LabeledRows labeled(const std::string& csv, std::vector<int> labels) {
  std::map<std::string, Relation, CaseInsensitiveLess> rels;
  rels.emplace("t", qctest::relation_from_text(csv));
  ResultSet rs = evaluate(parse("SELECT * FROM t"), qctest::snapshot_of(std::move(rels)));
  return assign_labels(rs, std::move(labels));
}

std::vector<std::size_t> all_rows(const LabeledRows& d) {
  std::vector<std::size_t> out(d.rows.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("root split on the labelled employees") {
  LabeledRows d = employees_labeled();
  auto split = best_split(d, all_rows(d));
  REQUIRE(split.has_value());
  CHECK(d.columns[split->column].schema.name == "Commission");
  CHECK(split->kind == SplitKind::NumericThreshold);
  CHECK(split->value == SqlValue::number(6200));
  CHECK(render(split->positive) == "Commission >= 6200");
  CHECK(render(split->negative) == "Commission < 6200");
  CHECK_FALSE(split->nullable);
  // Children {4 of class 1} and {4 of 2, 2 of 3}: 1 - (16/4 + 20/6) / 10.
  CHECK(split->weighted_gini == doctest::Approx(1.0 - (4.0 + 20.0 / 6.0) / 10.0));
}

TEST_CASE("best split agrees with the brute-force oracle") {
  std::mt19937_64 rng(21);
  int compared = 0;
  for (int i = 0; i < 150; ++i) {
    LabeledRows d = qctest::random_labeled_rows(rng, 40, 5, 1 + static_cast<int>(rng() % 4));
    std::vector<std::size_t> subset;
    for (std::size_t r = 0; r < d.rows.size(); ++r)
      if (rng() % 4 != 0) subset.push_back(r);
    auto got = best_split(d, subset);
    auto want = qctest::oracle::brute_force_split(d, subset);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) continue;
    ++compared;
    CHECK(got->column == want->column);
    CHECK(got->value == want->value);
    CHECK(std::fabs(got->weighted_gini - want->gini.value()) < 1e-12);
  }
  CHECK(compared > 50);
}

TEST_CASE("pure or inseparable subsets have no split") {
  LabeledRows d = labeled("a,b\n1,x\n1,x\n2,y\n", {0, 1, 0});
  CHECK_FALSE(best_split(d, std::vector<std::size_t>{0, 2}).has_value());
  CHECK_FALSE(best_split(d, std::vector<std::size_t>{0, 1}).has_value());
  CHECK_FALSE(best_split(d, std::vector<std::size_t>{}).has_value());
  CHECK(best_split(d, all_rows(d)).has_value());
}

TEST_CASE("nulls go to the negative branch") {
  LabeledRows d = labeled("a\n5\n\n1\n7\n", {1, 0, 0, 1});
  auto split = best_split(d, all_rows(d));
  REQUIRE(split.has_value());
  CHECK(split->value == SqlValue::number(5));
  CHECK(split->nullable);
  CHECK_FALSE(split->goes_left(d.rows[1]));
  CHECK(split->goes_left(d.rows[0]));

  DecisionTree tree = grow_levelwise(d, 2);
  std::vector<Rule> rules = extract_rules(tree);
  REQUIRE(rules.size() == 2);
  CHECK(render(rules[0].conjunction[0]) == "a >= 5");
  CHECK(render(rules[1].conjunction[0]) == "(a IS NULL OR a < 5)");
  CHECK(rules[1].rows == std::vector<std::size_t>{1, 2});
}

TEST_CASE("levelwise growth and pruning on the employees") {
  LabeledRows d = employees_labeled();
  DecisionTree grown = grow_levelwise(d, 3);
  CHECK(grown.leaf_count() >= 3);
  CHECK_FALSE(grown.insufficient_diversity);
  DecisionTree tree = prune_to_k(grown, 3);
  CHECK(tree.leaf_count() == 3);
  CHECK(tree.depth() == 2);

  std::vector<Rule> rules = extract_rules(tree);
  REQUIRE(rules.size() == 3);
  CHECK(render(rules[0].conjunction[0]) == "Commission >= 6200");
  REQUIRE(rules[1].conjunction.size() == 2);
  CHECK(render(rules[1].conjunction[1]) == "Gender = 'F'");
  CHECK(render(rules[2].conjunction[1]) == "Gender <> 'F'");
  CHECK(rules[0].rows.size() == 4);
  CHECK(rules[1].rows.size() == 4);
  CHECK(rules[2].rows.size() == 2);
  CHECK(rules[0].label == 1);
  CHECK(rules[0].purity == 1.0);

  std::string dump = tree.dump();
  CHECK(dump.find("split on Commission >= 6200") == 0);
  CHECK(dump.find("leaf class=1 rows=4") != std::string::npos);
}

TEST_CASE("growth stops at the first level with enough leaves") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    LabeledRows d = qctest::random_labeled_rows(rng, 60, 4, 5);
    if (d.rows.size() < 2) continue;
    std::size_t k = 2 + rng() % std::min<std::size_t>(4, d.rows.size() - 1);
    DecisionTree grown = grow_levelwise(d, k);
    if (grown.insufficient_diversity) {
      CHECK(grown.leaf_count() < k);
      CHECK(code_of([&] { prune_to_k(grown, k); }) == ErrorCode::CannotPrune);
      continue;
    }
    CHECK(grown.leaf_count() >= k);
    CHECK(grown.leaf_count() <= 2 * k - 2);
    DecisionTree tree = prune_to_k(grown, k);
    CHECK(tree.leaf_count() == k);
    CHECK(tree.depth() <= k - 1);
    CHECK(std::pow(2.0, static_cast<double>(tree.depth())) >= static_cast<double>(k));

    // Leaves partition the rows and every row follows its rule.
    std::vector<int> seen(d.rows.size(), 0);
    for (const Rule& rule : extract_rules(tree))
      for (std::size_t r : rule.rows) {
        ++seen[r];
        CHECK(qctest::oracle::conjunction_holds(rule.conjunction, d.columns, d.rows[r]));
      }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("tree errors") {
  LabeledRows d = labeled("a\n1\n2\n3\n", {0, 1, 1});
  CHECK(code_of([&] { grow_levelwise(d, 1); }) == ErrorCode::KOutOfRange);
  CHECK(code_of([&] { grow_levelwise(d, 4); }) == ErrorCode::KOutOfRange);
  LabeledRows bad = d;
  bad.labels.pop_back();
  CHECK(code_of([&] { grow_levelwise(bad, 2); }) == ErrorCode::SizeMismatch);

  LabeledRows same = labeled("a\n1\n2\n3\n", {4, 4, 4});
  DecisionTree bare = grow_levelwise(same, 2);
  CHECK(bare.insufficient_diversity);
  CHECK(bare.leaf_count() == 1);
  CHECK(code_of([&] { extract_rules(bare); }) == ErrorCode::BareRoot);
  CHECK(code_of([&] { prune_to_k(bare, 2); }) == ErrorCode::CannotPrune);

  Deadline expired(std::chrono::milliseconds(0));
  CHECK(code_of([&] { grow_levelwise(d, 2, &expired); }) == ErrorCode::Timeout);
}

TEST_CASE("ambiguous column names are qualified") {
  std::map<std::string, Relation, CaseInsensitiveLess> rels;
  rels.emplace("r", qctest::relation_from_text("x\n1\n2\n"));
  rels.emplace("s", qctest::relation_from_text("x\n5\n"));
  ResultSet rs = evaluate(parse("SELECT * FROM r, s"), qctest::snapshot_of(std::move(rels)));
  LabeledRows d = assign_labels(rs, std::vector<int>{0, 1});
  auto split = best_split(d, all_rows(d));
  REQUIRE(split.has_value());
  CHECK(render(split->positive) == "r.x >= 2");
}
