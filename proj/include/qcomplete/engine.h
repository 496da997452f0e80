#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcomplete/features.h"
#include "qcomplete/kmeans.h"
#include "qcomplete/tree.h"

namespace qcomplete {

struct EngineConfig {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::size_t max_rows = kDefaultMaxRows;
  FeatureConfig feature;
  KMeansOptions kmeans;
};

// Test-only: replaces k-means labelling with caller-supplied labels (one per
// working row). Used to reproduce fixtures whose clustering is given.
struct EngineHooks {
  std::optional<std::vector<int>> labels;
};

struct Completion {
  Conjunction conjunction;  // the injected atoms
  QueryAst query;           // original query (with its projection) plus the injected atoms
  std::string rendered;
  std::size_t row_count = 0;
  int leaf_class = 0;
  double leaf_purity = 0;
};

struct StageTimings {
  double evaluate_ms = 0;
  double cluster_ms = 0;
  double tree_ms = 0;
  double count_ms = 0;
};

struct CompletionDiagnostics {
  bool truncated = false;
  bool insufficient_diversity = false;
  std::size_t working_rows = 0;
  std::size_t max_rows = kDefaultMaxRows;
  std::optional<double> inertia;  // absent when labels were supplied
  std::size_t tree_depth = 0;
  StageTimings timings;
};

// Intermediate values kept for inspection and property checks.
struct CompletionTrace {
  LabeledRows working;
  DecisionTree tree;
  std::vector<Rule> rules;
};

struct CompletionSet {
  QueryAst original;
  std::size_t k_requested = 0;
  std::size_t k_delivered = 0;
  std::vector<Completion> completions;
  CompletionDiagnostics diagnostics;
  std::shared_ptr<const CompletionTrace> trace;
};

// Runs the pipeline: strip projection, materialize the working data (capped at
// max_rows), label it by k-means, grow and prune a k-leaf tree, turn each leaf
// path into a conjunction, and inject it into the original query.
//
// Errors: ParseError/Unsupported/validation codes, KOutOfRange (k < 2 or
// k > working rows), EmptyWorkingData, NoUsableFeatures, Timeout. A tree that
// stalls below k leaves is not an error: fewer completions are returned and
// diagnostics.insufficient_diversity is set.
CompletionSet complete(std::string_view query_text, const EngineConfig& cfg, const DatabaseSnapshot& db,
                       const EngineHooks& hooks = {}, const Deadline* deadline = nullptr);

// Builds a completion set from explicit conjunctions; row counts are evaluated
// against db. Useful for checking hand-written partitions with verify().
CompletionSet assemble(const QueryAst& original, const std::vector<Conjunction>& conjunctions,
                       const DatabaseSnapshot& db);

struct Witness {
  std::size_t ordinal = 0;  // position in the original query's evaluation
  Row row;                  // the original query's row (its projection)
  std::vector<std::size_t> completions;  // completion indices involved
  std::string reason;
};

struct VerificationReport {
  bool each_is_completion = true;
  bool pairwise_disjoint = true;
  bool covers_original = true;
  // True when the working data was truncated; cover is then checked over the
  // first max_rows rows of the original answer only.
  bool cover_limited_to_working_set = false;
  std::vector<Witness> witnesses;

  bool ok() const { return each_is_completion && pairwise_disjoint && covers_original; }
};

// Re-evaluates the original query and each completion, then checks that every
// completion extends the original's WHERE atoms (same SELECT and FROM, at
// least one added atom, rendered text reparses to the same query, answer
// contained in the original's), that no original row lands in two completions,
// and that every original row lands in one.
VerificationReport verify(const CompletionSet& cs, const DatabaseSnapshot& db);

}  // namespace qcomplete
