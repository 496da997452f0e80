#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>
#include <signal.h>

#include "qcomplete/engine.h"
#include "qcomplete/json_io.h"
#include "qcomplete/service.h"
#include "qcomplete/workspace.h"

namespace fs = std::filesystem;
using namespace qcomplete;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Internal:
    case ErrorCode::SizeMismatch:
    case ErrorCode::CannotPrune:
    case ErrorCode::BareRoot:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

void print_error(const Error& e, const std::string& sql) {
  std::cerr << "error: " << code_name(e.code()) << ": " << e.what() << "\n";
  if (e.position && !sql.empty()) {
    std::size_t pos = std::min(*e.position, sql.size());
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < pos; ++i)
      if (sql[i] == '\n') line_start = i + 1;
    std::size_t line_end = sql.find('\n', line_start);
    std::cerr << "  " << sql.substr(line_start, line_end == std::string::npos ? std::string::npos : line_end - line_start)
              << "\n  " << std::string(pos - line_start, ' ') << "^\n";
  }
  if (e.row) std::cerr << "  at row " << *e.row << (e.column.empty() ? "" : ", column " + e.column) << "\n";
}

SnapshotPtr open_workspace(const fs::path& ws) {
  RelationStore store;
  return store.put_all(load_workspace(ws));
}

std::string cell_text(const SqlValue& v) {
  if (v.is_null()) return "NULL";
  if (v.is_number()) return format_number(v.as_number());
  return v.as_text();
}

void print_table(const ResultSet& rs, std::ostream& out) {
  std::vector<std::size_t> width(rs.columns.size());
  for (std::size_t c = 0; c < rs.columns.size(); ++c) width[c] = rs.columns[c].schema.name.size();
  for (const auto& row : rs.rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], cell_text(row[c]).size());

  auto line = [&](auto cell) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      std::string s = cell(c);
      out << (c ? " | " : "") << s;
      if (c + 1 < width.size()) out << std::string(width[c] - s.size(), ' ');
    }
    out << "\n";
  };
  line([&](std::size_t c) { return rs.columns[c].schema.name; });
  for (std::size_t c = 0; c < width.size(); ++c) out << (c ? "-+-" : "") << std::string(width[c], '-');
  out << "\n";
  for (const auto& row : rs.rows) line([&](std::size_t c) { return cell_text(row[c]); });
  out << "(" << rs.size() << (rs.size() == 1 ? " row" : " rows") << (rs.truncated ? ", truncated" : "") << ")\n";
}

std::string conjunction_text(const Conjunction& c) {
  std::string out;
  for (const auto& a : c) out += (out.empty() ? "" : " AND ") + render(a);
  return out;
}

void print_completions_text(const CompletionSet& cs, const VerificationReport* report, std::ostream& out) {
  const auto& d = cs.diagnostics;
  out << "original: " << render(cs.original) << "\n";
  out << "completions: " << cs.k_delivered << " of " << cs.k_requested << "\n";
  for (std::size_t i = 0; i < cs.completions.size(); ++i) {
    const Completion& c = cs.completions[i];
    out << "[" << i + 1 << "] " << c.rendered << "\n";
    out << "    added: " << conjunction_text(c.conjunction) << "\n";
    out << "    rows: " << c.row_count << "  cluster: " << c.leaf_class
        << "  purity: " << format_number(c.leaf_purity) << "\n";
  }
  out << "working rows: " << d.working_rows << " (max " << d.max_rows << ", truncated: " << (d.truncated ? "yes" : "no")
      << ")\n";
  out << "insufficient diversity: " << (d.insufficient_diversity ? "yes" : "no") << "\n";
  out << "inertia: " << (d.inertia ? format_number(*d.inertia) : "n/a") << "\n";
  out << "tree depth: " << d.tree_depth << "\n";
  if (report) {
    if (report->ok()) {
      out << "partition: OK" << (report->cover_limited_to_working_set ? " (cover checked on working rows only)" : "")
          << "\n";
    } else {
      out << "partition: FAILED (completion: " << (report->each_is_completion ? "ok" : "no")
          << ", disjoint: " << (report->pairwise_disjoint ? "ok" : "no")
          << ", cover: " << (report->covers_original ? "ok" : "no") << ")\n";
      for (const auto& w : report->witnesses) out << "  ordinal " << w.ordinal << ": " << w.reason << "\n";
    }
  }
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query completion for SELECT-FROM-WHERE queries over CSV relations"};
  app.require_subcommand(1);

  std::string workspace = "./.qcomplete";
  app.add_option("--workspace", workspace, "Workspace directory holding loaded relations")
      ->envname("QC_WORKSPACE");

  std::string csv_path, rel_name;
  auto* load = app.add_subcommand("load", "Load a CSV file into the workspace");
  load->add_option("csv", csv_path, "CSV file (header row required)")->required();
  load->add_option("--name", rel_name, "Relation name (defaults to the file stem)");

  std::string sql, format = "table";
  std::size_t max_rows = kDefaultMaxRows;
  auto* query = app.add_subcommand("query", "Evaluate a query against the workspace");
  query->add_option("sql", sql, "SELECT statement")->required();
  query->add_option("--max-rows", max_rows, "Row cap")->check(CLI::PositiveNumber);
  query->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));

  EngineConfig cfg;
  bool do_verify = false, debug_tree = false, no_categoricals = false;
  std::string complete_format = "text";
  auto* comp = app.add_subcommand("complete", "Suggest k disjoint completions of a query");
  comp->add_option("sql", sql, "SELECT statement")->required();
  comp->add_option("--k", cfg.k, "Number of completions (>= 2)")->required();
  comp->add_option("--seed", cfg.seed, "Clustering seed");
  comp->add_option("--max-rows", cfg.max_rows, "Working data row cap")->check(CLI::PositiveNumber);
  comp->add_option("--max-cardinality", cfg.feature.max_categorical_cardinality,
                   "Largest text cardinality encoded for clustering")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  comp->add_flag("--no-categoricals", no_categoricals, "Cluster on numeric columns only");
  comp->add_flag("--verify", do_verify, "Check that the completions partition the original answer");
  comp->add_flag("--debug-tree", debug_tree, "Print the decision tree to stderr");
  comp->add_option("--format", complete_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::uint64_t demo_seed = 1;
  std::size_t cities = 30, packages = 11000;
  auto* demo = app.add_subcommand("demo-packages", "Generate the Cities/Packages demo relations into the workspace");
  demo->add_option("--seed", demo_seed, "Generator seed");
  demo->add_option("--cities", cities, "Number of cities")->check(CLI::PositiveNumber);
  demo->add_option("--packages", packages, "Number of packages")->check(CLI::PositiveNumber);

  ServiceConfig scfg;
  double timeout_s = 30;
  std::string data_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--host", scfg.host, "Bind address")->envname("QC_HOST");
  serve->add_option("--port", scfg.port, "Port (0 picks a free one)")->envname("QC_PORT")->check(CLI::Range(0, 65535));
  serve->add_option("--data", data_dir, "Directory of CSVs to preload (defaults to the workspace)")
      ->envname("QC_DATA");
  serve->add_option("--timeout", timeout_s, "Per-request time budget in seconds")
      ->envname("QC_TIMEOUT")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*load) {
      fs::path path(csv_path);
      if (rel_name.empty()) rel_name = path.stem().string();
      RelationStore store;
      Relation rel = store.load_csv(path, rel_name);
      save_relation(workspace, rel_name, rel);
      std::cout << "loaded " << rel.rows.size() << " rows into " << rel_name << " (";
      for (std::size_t c = 0; c < rel.schema.size(); ++c)
        std::cout << (c ? ", " : "") << rel.schema[c].name << ":" << type_name(rel.schema[c].type);
      std::cout << ")\n";
      return 0;
    }

    if (*query) {
      SnapshotPtr db = open_workspace(workspace);
      ResultSet rs = evaluate(parse(sql), *db, max_rows);
      if (format == "json") {
        std::cout << to_json(rs).dump(2) << "\n";
      } else if (format == "csv") {
        Relation rel;
        for (const auto& c : rs.columns) rel.schema.push_back(c.schema);
        rel.rows = rs.rows;
        std::cout << to_csv(rel);
      } else {
        print_table(rs, std::cout);
      }
      if (rs.truncated && format != "table") std::cerr << "warning: result truncated at " << max_rows << " rows\n";
      return 0;
    }

    if (*comp) {
      if (no_categoricals) cfg.feature.encode_categoricals = false;
      SnapshotPtr db = open_workspace(workspace);
      CompletionSet cs = complete(sql, cfg, *db);
      std::optional<VerificationReport> report;
      if (do_verify) report = verify(cs, *db);
      if (debug_tree) std::cerr << cs.trace->tree.dump();
      if (cs.diagnostics.insufficient_diversity)
        std::cerr << "warning: insufficient diversity: delivered " << cs.k_delivered << " of " << cs.k_requested
                  << " completions\n";
      if (cs.diagnostics.truncated)
        std::cerr << "warning: working data truncated at " << cs.diagnostics.max_rows << " rows\n";
      if (complete_format == "json") {
        Json out = to_json(cs, {.timings = false});
        if (report) out["verification"] = to_json(*report);
        std::cout << out.dump(2) << "\n";
      } else {
        print_completions_text(cs, report ? &*report : nullptr, std::cout);
      }
      return report && !report->ok() ? kExitInternal : 0;
    }

    if (*demo) {
      DatabaseSnapshot db = demo_packages(demo_seed, cities, packages);
      for (const auto& [name, rel] : db.relations()) {
        save_relation(workspace, name, rel);
        std::cout << "wrote " << name << " (" << rel.rows.size() << " rows)\n";
      }
      return 0;
    }

    if (*serve) {
      scfg.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
      scfg.data_dir = data_dir.empty() ? fs::path(workspace) : fs::path(data_dir);
      // Block the stop signals in every thread and wait for them on one.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

      Service service(scfg);
      int port = service.bind();
      std::atomic<bool> done{false};
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&stop_signals, &sig);
        if (!done) service.stop();
      });
      std::cout << "listening on http://" << scfg.host << ":" << port << " ("
                << service.store().snapshot()->relations().size() << " relations)" << std::endl;
      service.listen();
      done = true;
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
      return 0;
    }
  } catch (const Error& e) {
    print_error(e, sql);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: INTERNAL: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
