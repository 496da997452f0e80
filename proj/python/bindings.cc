#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcomplete/engine.h"
#include "qcomplete/json_io.h"
#include "qcomplete/workspace.h"

namespace py = pybind11;
using namespace qcomplete;

namespace {

// Results cross the boundary as JSON text; the Python package decodes them.
class Database {
 public:
  std::string load_csv_text(const std::string& name, const std::string& text) {
    return relation_summary(name, store_.load_csv_text(text, name)).dump();
  }

  std::string load_csv(const std::string& path, const std::string& name) {
    return relation_summary(name, store_.load_csv(path, name)).dump();
  }

  void load_workspace(const std::string& dir) { store_.put_all(qcomplete::load_workspace(dir)); }

  void demo_packages(std::uint64_t seed, std::size_t cities, std::size_t packages) {
    DatabaseSnapshot demo = qcomplete::demo_packages(seed, cities, packages);
    store_.put_all(demo.relations());
  }

  std::string schema() const { return schema_json(*store_.snapshot()).dump(); }

  std::string query(const std::string& sql, std::size_t max_rows) const {
    SnapshotPtr db = store_.snapshot();
    return to_json(evaluate(parse(sql), *db, max_rows)).dump();
  }

  std::string complete(const std::string& sql, std::size_t k, const std::string& config_json, bool check,
                       std::optional<std::vector<int>> labels) const {
    EngineConfig cfg = engine_config_from_json(Json::parse(config_json));
    cfg.k = k;
    EngineHooks hooks;
    hooks.labels = std::move(labels);
    SnapshotPtr db = store_.snapshot();
    CompletionSet cs = qcomplete::complete(sql, cfg, *db, hooks);
    Json out = to_json(cs);
    if (check) out["verification"] = to_json(verify(cs, *db));
    return out.dump();
  }

 private:
  RelationStore store_;
};

}  // namespace

PYBIND11_MODULE(_qcomplete, m) {
  m.doc() = "Query completion engine";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, to_json(e).dump().c_str());
    }
  });

  py::class_<Database>(m, "Database")
      .def(py::init<>())
      .def("load_csv_text", &Database::load_csv_text, py::arg("name"), py::arg("text"))
      .def("load_csv", &Database::load_csv, py::arg("path"), py::arg("name"))
      .def("load_workspace", &Database::load_workspace, py::arg("dir"))
      .def("demo_packages", &Database::demo_packages, py::arg("seed"), py::arg("cities"), py::arg("packages"))
      .def("schema", &Database::schema)
      .def("query", &Database::query, py::arg("sql"), py::arg("max_rows"), py::call_guard<py::gil_scoped_release>())
      .def("complete", &Database::complete, py::arg("sql"), py::arg("k"), py::arg("config_json"), py::arg("verify"),
           py::arg("labels"), py::call_guard<py::gil_scoped_release>());

  m.def("render", [](const std::string& sql) { return render(parse(sql)); }, py::arg("sql"));
  m.attr("DEFAULT_MAX_ROWS") = kDefaultMaxRows;
}
