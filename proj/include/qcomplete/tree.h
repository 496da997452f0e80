#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcomplete/kmeans.h"
#include "qcomplete/sql.h"

namespace qcomplete {

enum class SplitKind { NumericThreshold, CategoricalEquality };

// A binary test on one column with two opposite conditions.
//
//   numeric threshold t:    positive = (col >= t)   negative = (col < t)
//   categorical value v:    positive = (col = v)    negative = (col <> v)
//
// The positive branch is the left child. NULLs always take the negative
// branch; when the column is nullable the negative condition is emitted as
// (col IS NULL OR ...) so the two conditions stay complementary over every row.
struct Split {
  std::size_t column = 0;  // index into LabeledRows::columns
  SplitKind kind = SplitKind::NumericThreshold;
  SqlValue value;  // observed threshold or category
  Atom positive;
  Atom negative;
  bool nullable = false;
  double weighted_gini = 0;

  bool goes_left(const Row& row) const;
};

struct TreeNode {
  std::optional<Split> split;
  int left = -1;
  int right = -1;
  std::size_t depth = 0;
  std::vector<std::size_t> rows;
  // (label, count) sorted by label.
  std::vector<std::pair<int, std::size_t>> class_counts;
  int label = 0;  // majority label, ties to the smaller id

  bool is_leaf() const { return !split.has_value(); }
  double purity() const;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  // Growth stopped with fewer than k leaves because every frontier leaf was
  // pure or had no separating split.
  bool insufficient_diversity = false;

  std::size_t leaf_count() const;
  std::size_t depth() const;
  // Leaf node indices in left-to-right order.
  std::vector<std::size_t> leaves() const;
  // Indented text rendering for debugging.
  std::string dump() const;
};

// Column reference for columns[c], qualified only when the bare name is
// ambiguous among `columns`.
ColumnRef column_ref_for(std::span<const ResultColumn> columns, std::size_t c);

// Candidate splits: for numeric columns every observed distinct non-NULL value
// except the minimum; for text columns every observed distinct non-NULL value.
// Returns the candidate with the lowest weighted Gini impurity, keeping the
// first one in (column position, value) order on ties. Returns nullopt when the
// subset is label-pure or nothing separates it.
std::optional<Split> best_split(const LabeledRows& data, std::span<const std::size_t> subset);

// Breadth-first growth: each round splits every impure, splittable leaf of the
// newest level and stops at the first level with at least k leaves.
// Throws Error(KOutOfRange) unless 2 <= k <= rows.
DecisionTree grow_levelwise(const LabeledRows& data, std::size_t k, const Deadline* deadline = nullptr);

// Collapses deepest-level sibling leaf pairs until exactly k leaves remain,
// each time choosing the pair whose merge adds the least weighted Gini
// impurity (leftmost on ties). Throws Error(CannotPrune) if the tree has fewer than k leaves.
DecisionTree prune_to_k(DecisionTree tree, std::size_t k);

struct Rule {
  Conjunction conjunction;
  int label = 0;
  std::vector<std::size_t> rows;
  double purity = 0;
};

// One rule per leaf, left to right; each conjunction lists the conditions on
// the root-to-leaf path. Throws Error(BareRoot) for a single-leaf tree.
std::vector<Rule> extract_rules(const DecisionTree& tree);

}  // namespace qcomplete
