#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "qcomplete/json_io.h"
#include "qcomplete/relation.h"

namespace qcomplete {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::chrono::milliseconds timeout{30000};
  std::optional<std::filesystem::path> data_dir;
};

// HTTP status for an error code: 400 for request, SQL and ingestion errors,
// 422 when the query is valid but its data cannot be completed, 504 for
// timeouts, 500 otherwise.
int http_status(ErrorCode code);

struct ApiResponse {
  int status = 200;
  Json body;
};

class Service {
 public:
  explicit Service(ServiceConfig cfg, std::shared_ptr<RelationStore> store = nullptr);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  RelationStore& store() { return *store_; }

  // Routes one request without a socket. Every non-2xx body is an ApiError
  // {code, message, detail}.
  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body) const;

  // Binds the listening socket and returns the bound port.
  int bind();
  // Serves until stop(); requires bind().
  void listen();
  void stop();

 private:
  ApiResponse post_datasets(const Json& body) const;
  ApiResponse post_query(const Json& body) const;
  ApiResponse post_complete(const Json& body) const;
  ApiResponse get_schema() const;

  struct Server;
  ServiceConfig cfg_;
  std::shared_ptr<RelationStore> store_;
  std::unique_ptr<Server> server_;
};

}  // namespace qcomplete
