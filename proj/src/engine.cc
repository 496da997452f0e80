#include "qcomplete/engine.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <utility>

namespace qcomplete {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Completion make_completion(const QueryAst& original, Conjunction conj, const DatabaseSnapshot& db) {
  Completion c;
  c.query = inject(original, conj);
  c.conjunction = std::move(conj);
  c.rendered = render(c.query);
  c.row_count = count(c.query, db);
  return c;
}

bool extends(const QueryAst& original, const QueryAst& q) {
  if (q.select != original.select || q.from != original.from) return false;
  if (q.where.size() <= original.where.size()) return false;
  for (std::size_t i = 0; i < original.where.size(); ++i)
    if (!(q.where[i] == original.where[i])) return false;
  return true;
}

}  // namespace

CompletionSet complete(std::string_view query_text, const EngineConfig& cfg, const DatabaseSnapshot& db,
                       const EngineHooks& hooks, const Deadline* deadline) {
  QueryAst original = parse(query_text);
  validate_completable(original, db.schema()).require_ok();
  if (cfg.k < 2) throw Error(ErrorCode::KOutOfRange, "k must be at least 2");
  if (cfg.max_rows == 0) throw Error(ErrorCode::BadRequest, "max_rows must be positive");

  CompletionSet cs;
  cs.original = original;
  cs.k_requested = cfg.k;
  auto& diag = cs.diagnostics;
  diag.max_rows = cfg.max_rows;

  auto t0 = Clock::now();
  ResultSet working = evaluate(strip_projection(original), db, cfg.max_rows, deadline);
  diag.timings.evaluate_ms = ms_since(t0);
  diag.truncated = working.truncated;
  diag.working_rows = working.size();
  if (working.empty()) throw Error(ErrorCode::EmptyWorkingData, "the query has an empty answer set");
  if (cfg.k > working.size())
    throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(cfg.k) + " exceeds the " +
                                            std::to_string(working.size()) + " working rows");

  t0 = Clock::now();
  auto trace = std::make_shared<CompletionTrace>();
  if (hooks.labels) {
    trace->working = assign_labels(working, *hooks.labels);
  } else {
    FeatureMatrix fm = prepare(working, cfg.feature);
    ClusterModel model = kmeans(fm.values, cfg.k, cfg.seed, cfg.kmeans, deadline);
    diag.inertia = model.inertia;
    trace->working = assign_labels(working, model);
  }
  diag.timings.cluster_ms = ms_since(t0);

  t0 = Clock::now();
  DecisionTree tree = grow_levelwise(trace->working, cfg.k, deadline);
  if (tree.leaf_count() > cfg.k) tree = prune_to_k(std::move(tree), cfg.k);
  diag.insufficient_diversity = tree.insufficient_diversity;
  diag.tree_depth = tree.depth();
  if (tree.leaf_count() > 1) trace->rules = extract_rules(tree);
  trace->tree = std::move(tree);
  diag.timings.tree_ms = ms_since(t0);

  t0 = Clock::now();
  for (const Rule& rule : trace->rules) {
    if (deadline) deadline->check();
    Completion c = make_completion(original, rule.conjunction, db);
    c.leaf_class = rule.label;
    c.leaf_purity = rule.purity;
    cs.completions.push_back(std::move(c));
  }
  diag.timings.count_ms = ms_since(t0);

  cs.k_delivered = cs.completions.size();
  cs.trace = std::move(trace);
  return cs;
}

CompletionSet assemble(const QueryAst& original, const std::vector<Conjunction>& conjunctions,
                       const DatabaseSnapshot& db) {
  CompletionSet cs;
  cs.original = original;
  cs.k_requested = conjunctions.size();
  for (const auto& conj : conjunctions) cs.completions.push_back(make_completion(original, conj, db));
  cs.k_delivered = cs.completions.size();
  return cs;
}

VerificationReport verify(const CompletionSet& cs, const DatabaseSnapshot& db) {
  VerificationReport report;
  ResultSet base = evaluate(cs.original, db);

  std::map<std::vector<std::size_t>, std::size_t> ordinal_of;
  for (std::size_t i = 0; i < base.lineage.size(); ++i) ordinal_of.emplace(base.lineage[i], i);

  std::size_t cover_scope = base.size();
  if (cs.diagnostics.truncated) {
    report.cover_limited_to_working_set = true;
    cover_scope = std::min(cover_scope, cs.diagnostics.max_rows);
  }

  std::vector<std::vector<std::size_t>> hits(base.size());
  for (std::size_t ci = 0; ci < cs.completions.size(); ++ci) {
    const Completion& c = cs.completions[ci];
    bool syntactic = extends(cs.original, c.query);
    if (syntactic) {
      try {
        syntactic = parse(c.rendered) == c.query;
      } catch (const Error&) {
        syntactic = false;
      }
    }
    if (!syntactic) {
      report.each_is_completion = false;
      report.witnesses.push_back({0, {}, {ci}, "not a syntactic extension of the original query"});
    }

    ResultSet rs = evaluate(c.query, db);
    for (std::size_t r = 0; r < rs.size(); ++r) {
      auto it = ordinal_of.find(rs.lineage[r]);
      if (it == ordinal_of.end()) {
        report.each_is_completion = false;
        report.witnesses.push_back({0, rs.rows[r], {ci}, "row not in the original answer"});
        continue;
      }
      hits[it->second].push_back(ci);
    }
  }

  for (std::size_t i = 0; i < base.size(); ++i) {
    if (hits[i].size() > 1) {
      report.pairwise_disjoint = false;
      report.witnesses.push_back({i, base.rows[i], hits[i], "row answered by more than one completion"});
    } else if (hits[i].empty() && i < cover_scope) {
      report.covers_original = false;
      report.witnesses.push_back({i, base.rows[i], {}, "row answered by no completion"});
    }
  }
  return report;
}

}  // namespace qcomplete
