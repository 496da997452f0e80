#include "qcomplete/service.h"

#include <httplib.h>

#include "qcomplete/workspace.h"

namespace qcomplete {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::Unsupported:
    case ErrorCode::UnknownTable:
    case ErrorCode::UnknownColumn:
    case ErrorCode::AmbiguousColumn:
    case ErrorCode::TypeMismatch:
    case ErrorCode::EmptyConjunction:
    case ErrorCode::RaggedRow:
    case ErrorCode::DuplicateHeader:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::ValueParse:
    case ErrorCode::KOutOfRange:
    case ErrorCode::BadRequest:
      return 400;
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::EmptyResult:
    case ErrorCode::EmptyWorkingData:
    case ErrorCode::NoUsableFeatures:
      return 422;
    case ErrorCode::Timeout:
      return 504;
    default:
      return 500;
  }
}

namespace {

ApiResponse error_response(const Error& e) { return {http_status(e.code()), to_json(e)}; }

const Json& require(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) throw Error(ErrorCode::BadRequest, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const Json& body, const char* key) {
  const Json& v = require(body, key);
  if (!v.is_string()) throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

struct Service::Server {
  httplib::Server http;
};

Service::Service(ServiceConfig cfg, std::shared_ptr<RelationStore> store)
    : cfg_(std::move(cfg)), store_(store ? std::move(store) : std::make_shared<RelationStore>()) {
  if (cfg_.data_dir) store_->put_all(load_workspace(*cfg_.data_dir));
}

Service::~Service() { stop(); }

ApiResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) const {
  try {
    if (method == "GET" && path == "/schema") return get_schema();
    if (method == "POST" && (path == "/datasets" || path == "/query" || path == "/complete")) {
      Json j;
      try {
        j = Json::parse(body);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::BadRequest, std::string("request body is not valid JSON: ") + e.what());
      }
      if (!j.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
      if (path == "/datasets") return post_datasets(j);
      if (path == "/query") return post_query(j);
      return post_complete(j);
    }
    throw Error(ErrorCode::NotFound, "no route for " + method + " " + path);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return error_response(Error(ErrorCode::Internal, e.what()));
  }
}

ApiResponse Service::post_datasets(const Json& body) const {
  std::string name = require_string(body, "name");
  std::string csv = require_string(body, "csv");
  Relation rel = store_->load_csv_text(csv, name);
  Json out = relation_summary(name, rel);
  out["version"] = store_->snapshot()->version();
  return {200, std::move(out)};
}

ApiResponse Service::post_query(const Json& body) const {
  std::string sql = require_string(body, "sql");
  std::size_t max_rows = kDefaultMaxRows;
  if (auto it = body.find("max_rows"); it != body.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 1)
      throw Error(ErrorCode::BadRequest, "max_rows must be a positive integer");
    max_rows = it->get<std::size_t>();
  }
  Deadline deadline(cfg_.timeout);
  SnapshotPtr db = store_->snapshot();
  ResultSet rs = evaluate(parse(sql), *db, max_rows, &deadline);
  return {200, to_json(rs)};
}

ApiResponse Service::post_complete(const Json& body) const {
  std::string sql = require_string(body, "sql");
  const Json& k = require(body, "k");
  if (!k.is_number_integer()) throw Error(ErrorCode::BadRequest, "k must be an integer");
  if (k.get<long long>() < 2) throw Error(ErrorCode::KOutOfRange, "k must be at least 2");
  EngineConfig cfg = engine_config_from_json(body);
  cfg.k = k.get<std::size_t>();
  if (cfg.max_rows == 0) throw Error(ErrorCode::BadRequest, "max_rows must be positive");
  bool check = false;
  if (auto it = body.find("verify"); it != body.end() && !it->is_null()) {
    if (!it->is_boolean()) throw Error(ErrorCode::BadRequest, "verify must be a boolean");
    check = it->get<bool>();
  }

  Deadline deadline(cfg_.timeout);
  SnapshotPtr db = store_->snapshot();
  CompletionSet cs = complete(sql, cfg, *db, {}, &deadline);
  Json out = to_json(cs);
  if (check) out["verification"] = to_json(verify(cs, *db));
  return {200, std::move(out)};
}

ApiResponse Service::get_schema() const { return {200, schema_json(*store_->snapshot())}; }

int Service::bind() {
  if (server_) throw Error(ErrorCode::Internal, "service is already bound");
  server_ = std::make_unique<Server>();
  auto& http = server_->http;

  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto route = [this, reply](const char* method) {
    return [this, reply, method](const httplib::Request& req, httplib::Response& res) {
      reply(res, handle(method, req.path, req.body));
    };
  };

  http.Get("/schema", route("GET"));
  http.Post("/query", route("POST"));
  http.Post("/complete", route("POST"));
  http.Post("/datasets", [this, reply](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) return reply(res, handle("POST", req.path, req.body));
    Json body = Json::object();
    if (req.has_file("name")) body["name"] = req.get_file_value("name").content;
    if (req.has_file("file")) {
      auto file = req.get_file_value("file");
      body["csv"] = file.content;
      if (!body.contains("name")) body["name"] = std::filesystem::path(file.filename).stem().string();
    } else if (req.has_file("csv")) {
      body["csv"] = req.get_file_value("csv").content;
    }
    reply(res, handle("POST", req.path, body.dump()));
  });
  http.set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404)
      reply(res, error_response(Error(ErrorCode::NotFound, "no route for " + req.method + " " + req.path)));
    else if (res.body.empty())
      reply(res, {res.status, to_json(Error(ErrorCode::BadRequest, "malformed request"))});
  });
  http.set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    reply(res, error_response(Error(ErrorCode::Internal, "unhandled server error")));
  });

  int port = cfg_.port == 0 ? http.bind_to_any_port(cfg_.host) : (http.bind_to_port(cfg_.host, cfg_.port) ? cfg_.port : -1);
  if (port < 0) throw Error(ErrorCode::IoError, "cannot bind " + cfg_.host + ":" + std::to_string(cfg_.port));
  return port;
}

void Service::listen() {
  if (!server_) throw Error(ErrorCode::Internal, "bind() must be called before listen()");
  server_->http.listen_after_bind();
}

void Service::stop() {
  if (server_) server_->http.stop();
}

}  // namespace qcomplete
