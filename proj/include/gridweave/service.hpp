#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <thread>

#include "gridweave/hierarchy.hpp"
#include "gridweave/model.hpp"

namespace httplib {
class Server;
}

namespace gridweave {

struct ServiceConfig {
  GridSpec grid{30, 30};
  std::uint64_t seed = 0;
  HierarchyOptions options;
};

struct ServiceResponse {
  int status = 200;
  std::string body; // UTF-8 JSON
};

/// Session over one sample set: the root node is built on construction and
/// every zoom registers an immutable child under id "n<k>", k = 1, 2, ...
/// Handlers may be called concurrently. Error bodies are
/// {"error": code, "detail": text}; unknown nodes answer 404, malformed
/// requests and invalid selections 400.
class LayoutService {
public:
  LayoutService(std::shared_ptr<const SampleSet> samples, ServiceConfig config);

  /// {"node","parent","breadcrumb","grid":{"w","h"},"cells":[...],"report":{...}}.
  /// Cells are listed in index order; empty cells have null sample and cluster.
  ServiceResponse get_layout(const std::string& node) const;
  /// Body {"node": id, "cells": [[col,row], ...]}; answers the child's layout payload.
  ServiceResponse zoom(const std::string& body);
  ServiceResponse measures(const std::string& node) const;
  /// Grid, pipeline, seed, sample count and the cluster palette.
  ServiceResponse config() const;

  std::shared_ptr<const HierarchyNode> node(const std::string& id) const;
  std::size_t node_count() const;

private:
  std::shared_ptr<const SampleSet> samples_;
  ServiceConfig config_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const HierarchyNode>> nodes_;
  std::atomic<std::uint64_t> next_id_{1};
};

/// HTTP front end: GET /api/layout?node=, POST /api/zoom, GET /api/measures?node=,
/// GET /api/config. Node defaults to "root".
class HttpServer {
public:
  explicit HttpServer(LayoutService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host`; port 0 picks a free port. Returns the bound port. Throws
  /// Error("bind_failed").
  int bind(const std::string& host, int port);
  /// Serves until stop(); blocks the caller.
  void run();
  /// Serves on a background thread.
  void start();
  void stop();

private:
  LayoutService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

} // namespace gridweave
