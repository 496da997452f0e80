#include "qcomplete/tree.h"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "qcomplete/eval.h"

namespace qcomplete {

namespace {

__extension__ typedef __int128 i128;

// Exact non-negative fraction; n <= 1e5 keeps every product below 2^126.
struct Fraction {
  i128 num = 0;
  i128 den = 1;

  bool less(const Fraction& o) const { return num * o.den < o.num * den; }
};

i128 sum_squares(const std::vector<std::size_t>& counts) {
  i128 s = 0;
  for (std::size_t c : counts) s += static_cast<i128>(c) * static_cast<i128>(c);
  return s;
}

// Sum over both children of (sum of squared class counts) / size. Larger is
// purer: weighted Gini = 1 - score / n.
Fraction split_score(i128 s_a, i128 n_a, i128 s_b, i128 n_b) { return {s_a * n_b + s_b * n_a, n_a * n_b}; }

std::vector<std::pair<int, std::size_t>> histogram(const std::vector<int>& labels, std::span<const std::size_t> rows) {
  std::map<int, std::size_t> counts;
  for (std::size_t r : rows) ++counts[labels[r]];
  return {counts.begin(), counts.end()};
}

int majority(const std::vector<std::pair<int, std::size_t>>& counts) {
  int best = 0;
  std::size_t best_n = 0;
  for (const auto& [label, n] : counts)
    if (n > best_n) {
      best = label;
      best_n = n;
    }
  return best;
}

TreeNode make_node(const LabeledRows& data, std::vector<std::size_t> rows, std::size_t depth) {
  TreeNode node;
  node.depth = depth;
  node.class_counts = histogram(data.labels, rows);
  node.label = majority(node.class_counts);
  node.rows = std::move(rows);
  return node;
}

i128 node_sum_squares(const TreeNode& node) {
  i128 s = 0;
  for (const auto& [label, n] : node.class_counts) s += static_cast<i128>(n) * static_cast<i128>(n);
  return s;
}

}  // namespace

bool Split::goes_left(const Row& row) const {
  const SqlValue& v = row[column];
  return eval_atom(positive.op, v, value);
}

double TreeNode::purity() const {
  if (rows.empty()) return 0;
  std::size_t top = 0;
  for (const auto& [label, n] : class_counts) top = std::max(top, n);
  return static_cast<double>(top) / static_cast<double>(rows.size());
}

ColumnRef column_ref_for(std::span<const ResultColumn> columns, std::size_t c) {
  const auto& target = columns[c];
  std::size_t same_name = 0;
  for (const auto& col : columns)
    if (iequals(col.schema.name, target.schema.name)) ++same_name;
  ColumnRef ref;
  ref.column = target.schema.name;
  if (same_name > 1) ref.qualifier = target.table;
  return ref;
}

std::optional<Split> best_split(const LabeledRows& data, std::span<const std::size_t> subset) {
  if (subset.empty()) return std::nullopt;

  // Dense class ids for this subset.
  std::map<int, std::size_t> dense;
  for (std::size_t r : subset) dense.emplace(data.labels[r], 0);
  if (dense.size() < 2) return std::nullopt;
  std::size_t next = 0;
  for (auto& [label, id] : dense) id = next++;
  const std::size_t classes = dense.size();
  std::vector<std::size_t> cls(subset.size());
  std::vector<std::size_t> total(classes, 0);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    cls[i] = dense.at(data.labels[subset[i]]);
    ++total[cls[i]];
  }
  const auto n = static_cast<i128>(subset.size());

  struct Best {
    Fraction score;
    std::size_t column;
    SplitKind kind;
    SqlValue value;
  };
  std::optional<Best> best;
  auto offer = [&](const Fraction& score, std::size_t column, SplitKind kind, const SqlValue& value) {
    if (!best || best->score.less(score)) best = Best{score, column, kind, value};
  };

  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (data.columns[c].schema.type == ColumnType::Numeric) {
      std::vector<std::pair<double, std::size_t>> values;  // (value, class)
      std::vector<std::size_t> neg(classes, 0);            // rows below the threshold, plus NULLs
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const SqlValue& v = data.rows[subset[i]][c];
        if (v.is_number())
          values.emplace_back(v.as_number(), cls[i]);
        else
          ++neg[cls[i]];
      }
      if (values.empty()) continue;
      std::sort(values.begin(), values.end());
      std::vector<std::size_t> pos = total;
      for (std::size_t k = 0; k < classes; ++k) pos[k] -= neg[k];
      i128 n_neg = static_cast<i128>(subset.size() - values.size());
      i128 s_neg = sum_squares(neg);
      i128 s_pos = sum_squares(pos);

      std::size_t i = 0;
      while (i < values.size()) {
        double t = values[i].first;
        if (i > 0) offer(split_score(s_neg, n_neg, s_pos, n - n_neg), c, SplitKind::NumericThreshold,
                         SqlValue::number(t));
        for (; i < values.size() && values[i].first == t; ++i) {
          std::size_t k = values[i].second;
          s_neg += 2 * static_cast<i128>(neg[k]) + 1;
          s_pos -= 2 * static_cast<i128>(pos[k]) - 1;
          ++neg[k];
          --pos[k];
          ++n_neg;
        }
      }
    } else {
      std::map<std::string, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const SqlValue& v = data.rows[subset[i]][c];
        if (!v.is_text()) continue;
        auto& g = groups[v.as_text()];
        if (g.empty()) g.assign(classes, 0);
        ++g[cls[i]];
      }
      for (const auto& [value, eq] : groups) {
        i128 n_eq = 0;
        std::vector<std::size_t> ne = total;
        for (std::size_t k = 0; k < classes; ++k) {
          n_eq += static_cast<i128>(eq[k]);
          ne[k] -= eq[k];
        }
        if (n_eq == n) continue;
        offer(split_score(sum_squares(eq), n_eq, sum_squares(ne), n - n_eq), c, SplitKind::CategoricalEquality,
              SqlValue::text(value));
      }
    }
  }
  if (!best) return std::nullopt;

  Split split;
  split.column = best->column;
  split.kind = best->kind;
  split.value = best->value;
  split.nullable = data.columns[best->column].schema.nullable;
  ColumnRef ref = column_ref_for(data.columns, best->column);
  if (best->kind == SplitKind::NumericThreshold) {
    split.positive = Atom::compare(ref, CompareOp::Ge, best->value);
    split.negative = Atom::compare(ref, CompareOp::Lt, best->value);
  } else {
    split.positive = Atom::compare(ref, CompareOp::Eq, best->value);
    split.negative = Atom::compare(ref, CompareOp::Ne, best->value);
  }
  split.weighted_gini = 1.0 - static_cast<double>(best->score.num) / static_cast<double>(best->score.den) /
                                  static_cast<double>(n);
  return split;
}

std::size_t DecisionTree::leaf_count() const { return leaves().size(); }

std::vector<std::size_t> DecisionTree::leaves() const {
  std::vector<std::size_t> out;
  if (nodes.empty()) return out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (nodes[i].is_leaf()) {
      out.push_back(i);
    } else {
      stack.push_back(static_cast<std::size_t>(nodes[i].right));
      stack.push_back(static_cast<std::size_t>(nodes[i].left));
    }
  }
  return out;
}

std::size_t DecisionTree::depth() const {
  std::size_t d = 0;
  for (std::size_t leaf : leaves()) d = std::max(d, nodes[leaf].depth);
  return d;
}

std::string DecisionTree::dump() const {
  std::ostringstream out;
  std::function<void(std::size_t, const std::string&)> walk = [&](std::size_t i, const std::string& edge) {
    const TreeNode& node = nodes[i];
    out << std::string(node.depth * 2, ' ') << edge;
    if (node.is_leaf()) {
      out << "leaf class=" << node.label << " rows=" << node.rows.size() << " purity=" << node.purity() << '\n';
      return;
    }
    out << "split on " << render(node.split->positive) << " (gini " << node.split->weighted_gini
        << ", rows=" << node.rows.size() << ")\n";
    walk(static_cast<std::size_t>(node.left), "yes: ");
    walk(static_cast<std::size_t>(node.right), "no: ");
  };
  if (!nodes.empty()) walk(0, "");
  return out.str();
}

DecisionTree grow_levelwise(const LabeledRows& data, std::size_t k, const Deadline* deadline) {
  const std::size_t n = data.rows.size();
  if (data.labels.size() != n) throw Error(ErrorCode::SizeMismatch, "labels and rows differ in length");
  if (k < 2 || k > n)
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " is out of range for " + std::to_string(n) + " rows (need 2 <= k <= n)");

  DecisionTree tree;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  tree.nodes.push_back(make_node(data, std::move(all), 0));

  std::vector<std::size_t> frontier{0};
  std::size_t leaves = 1;
  while (leaves < k) {
    if (deadline) deadline->check();
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      if (tree.nodes[idx].class_counts.size() < 2) continue;
      auto split = best_split(data, tree.nodes[idx].rows);
      if (!split) continue;
      std::vector<std::size_t> left, right;
      for (std::size_t r : tree.nodes[idx].rows) (split->goes_left(data.rows[r]) ? left : right).push_back(r);
      std::size_t depth = tree.nodes[idx].depth + 1;
      tree.nodes.push_back(make_node(data, std::move(left), depth));
      tree.nodes.push_back(make_node(data, std::move(right), depth));
      auto& node = tree.nodes[idx];
      node.split = std::move(*split);
      node.left = static_cast<int>(tree.nodes.size() - 2);
      node.right = static_cast<int>(tree.nodes.size() - 1);
      next.push_back(static_cast<std::size_t>(node.left));
      next.push_back(static_cast<std::size_t>(node.right));
      ++leaves;
    }
    if (next.empty()) {
      tree.insufficient_diversity = true;
      break;
    }
    frontier = std::move(next);
  }
  return tree;
}

namespace {

// Renumbers reachable nodes in preorder and drops detached ones.
DecisionTree compact(const DecisionTree& in) {
  DecisionTree out;
  out.insufficient_diversity = in.insufficient_diversity;
  std::function<int(std::size_t)> copy = [&](std::size_t i) -> int {
    auto self = static_cast<int>(out.nodes.size());
    out.nodes.push_back(in.nodes[i]);
    if (!in.nodes[i].is_leaf()) {
      int l = copy(static_cast<std::size_t>(in.nodes[i].left));
      int r = copy(static_cast<std::size_t>(in.nodes[i].right));
      out.nodes[static_cast<std::size_t>(self)].left = l;
      out.nodes[static_cast<std::size_t>(self)].right = r;
    }
    return self;
  };
  if (!in.nodes.empty()) copy(0);
  return out;
}

std::vector<std::size_t> preorder_internal(const DecisionTree& tree) {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (tree.nodes[i].is_leaf()) continue;
    out.push_back(i);
    stack.push_back(static_cast<std::size_t>(tree.nodes[i].right));
    stack.push_back(static_cast<std::size_t>(tree.nodes[i].left));
  }
  return out;
}

}  // namespace

DecisionTree prune_to_k(DecisionTree tree, std::size_t k) {
  std::size_t leaves = tree.leaf_count();
  if (leaves < k)
    throw Error(ErrorCode::CannotPrune,
                "tree has " + std::to_string(leaves) + " leaves, fewer than k=" + std::to_string(k));

  while (leaves > k) {
    const std::size_t deepest = tree.depth();
    std::optional<std::size_t> pick;
    Fraction pick_cost;
    for (std::size_t p : preorder_internal(tree)) {
      const TreeNode& l = tree.nodes[static_cast<std::size_t>(tree.nodes[p].left)];
      const TreeNode& r = tree.nodes[static_cast<std::size_t>(tree.nodes[p].right)];
      if (!l.is_leaf() || !r.is_leaf() || l.depth != deepest) continue;
      // Impurity added by the merge, scaled by n:  S_l/n_l + S_r/n_r - S_p/n_p.
      i128 nl = static_cast<i128>(l.rows.size()), nr = static_cast<i128>(r.rows.size());
      i128 np = nl + nr;
      Fraction cost{node_sum_squares(l) * nr * np + node_sum_squares(r) * nl * np -
                        node_sum_squares(tree.nodes[p]) * nl * nr,
                    nl * nr * np};
      if (!pick || cost.less(pick_cost)) {
        pick = p;
        pick_cost = cost;
      }
    }
    if (!pick) throw Error(ErrorCode::Internal, "no deepest sibling pair left to merge");
    TreeNode& parent = tree.nodes[*pick];
    parent.split.reset();
    parent.left = parent.right = -1;
    --leaves;
  }
  return compact(tree);
}

std::vector<Rule> extract_rules(const DecisionTree& tree) {
  if (tree.nodes.empty() || tree.nodes[0].is_leaf())
    throw Error(ErrorCode::BareRoot, "a single-leaf tree has no conditions to extract");

  std::vector<Rule> out;
  Conjunction path;
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) {
      out.push_back(Rule{path, node.label, node.rows, node.purity()});
      return;
    }
    path.push_back(node.split->positive);
    walk(static_cast<std::size_t>(node.left));
    path.back() = node.split->negative;
    path.back().or_null = node.split->nullable;
    walk(static_cast<std::size_t>(node.right));
    path.pop_back();
  };
  walk(0);
  return out;
}

}  // namespace qcomplete
