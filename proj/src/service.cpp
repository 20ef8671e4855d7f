#include "gridweave/service.hpp"

#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "gridweave/render.hpp"

namespace gridweave {

using nlohmann::json;

namespace {

ServiceResponse error_response(int status, const std::string& code, const std::string& detail) {
  return {status, json{{"error", code}, {"detail", detail}}.dump()};
}

json report_json(const MeasureReport& r) {
  return {{"proximity", r.proximity},
          {"compactness", r.compactness},
          {"area_ratio", r.area_ratio},
          {"triple_ratio", r.triple_ratio},
          {"perimeter_ratio", r.perimeter_ratio},
          {"cut_ratio", r.cut_ratio}};
}

json layout_json(const HierarchyNode& node) {
  const SampleSet& u = *node.universe;
  const GridSpec& g = node.layout.spec;
  json cells = json::array();
  for (CellIndex i = 0; i < g.capacity(); ++i) {
    const Cell c = g.cell(i);
    json cell = {{"col", c.col}, {"row", c.row}};
    if (const auto s = node.sample_at(i)) {
      const Sample& sample = u.samples[*s];
      json meta = json::object();
      for (const auto& [k, v] : sample.meta) meta[k] = v;
      const auto hidden = node.assigned.find(*s);
      cell["sample"] = sample.id;
      cell["cluster"] = u.cluster_name(sample.cluster);
      cell["cluster_id"] = sample.cluster;
      cell["meta"] = meta;
      cell["hidden"] = hidden == node.assigned.end() ? 0 : hidden->second.size();
    } else {
      cell["sample"] = nullptr;
      cell["cluster"] = nullptr;
      cell["cluster_id"] = nullptr;
    }
    cells.push_back(std::move(cell));
  }
  return {{"node", node.id},
          {"parent", node.parent ? json(*node.parent) : json(nullptr)},
          {"breadcrumb", node.breadcrumb},
          {"grid", {{"w", g.width}, {"h", g.height}}},
          {"cells", cells},
          {"report", report_json(node.report)}};
}

} // namespace

LayoutService::LayoutService(std::shared_ptr<const SampleSet> samples, ServiceConfig config)
    : samples_(std::move(samples)), config_(std::move(config)) {
  auto root = std::make_shared<const HierarchyNode>(
      build_root(samples_, config_.grid, config_.seed, config_.options, "root"));
  nodes_.emplace("root", std::move(root));
}

std::shared_ptr<const HierarchyNode> LayoutService::node(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : it->second;
}

std::size_t LayoutService::node_count() const {
  std::shared_lock lock(mutex_);
  return nodes_.size();
}

ServiceResponse LayoutService::get_layout(const std::string& id) const {
  const auto n = node(id);
  if (!n) return error_response(404, "unknown_node", "no node '" + id + "'");
  return {200, layout_json(*n).dump()};
}

ServiceResponse LayoutService::measures(const std::string& id) const {
  const auto n = node(id);
  if (!n) return error_response(404, "unknown_node", "no node '" + id + "'");
  return {200, json{{"node", n->id}, {"report", report_json(n->report)}}.dump()};
}

ServiceResponse LayoutService::zoom(const std::string& body) {
  std::string parent_id;
  std::vector<Cell> cells;
  try {
    const json req = json::parse(body);
    parent_id = req.at("node").get<std::string>();
    for (const json& c : req.at("cells")) {
      if (!c.is_array() || c.size() != 2)
        return error_response(400, "bad_request", "cells must be [col,row] pairs");
      cells.push_back({c[0].get<int>(), c[1].get<int>()});
    }
  } catch (const json::exception& e) {
    return error_response(400, "bad_request", std::string("malformed zoom request: ") + e.what());
  }
  const auto parent = node(parent_id);
  if (!parent) return error_response(404, "unknown_node", "no node '" + parent_id + "'");
  const std::string child_id = "n" + std::to_string(next_id_.fetch_add(1));
  try {
    const std::uint64_t seed = child_seed(config_.seed, parent_id, cells);
    auto child = std::make_shared<const HierarchyNode>(
        gridweave::zoom(*parent, cells, config_.grid, seed, child_id, config_.options));
    json payload = layout_json(*child);
    {
      std::unique_lock lock(mutex_);
      nodes_.emplace(child_id, std::move(child));
    }
    return {200, payload.dump()};
  } catch (const Error& e) {
    const int status = e.code() == "invalid_selection" ? 400 : 500;
    return error_response(status, e.code(), e.what());
  }
}

ServiceResponse LayoutService::config() const {
  json clusters = json::array();
  for (std::size_t k = 0; k < samples_->cluster_names.size(); ++k)
    clusters.push_back({{"id", k},
                        {"name", samples_->cluster_names[k]},
                        {"color", cluster_color(static_cast<ClusterId>(k))}});
  json palette = json::array();
  for (const auto c : kPalette) palette.push_back(c);
  return {200, json{{"grid", {{"w", config_.grid.width}, {"h", config_.grid.height}}},
                    {"pipeline", to_string(config_.options.pipeline)},
                    {"seed", config_.seed},
                    {"samples", samples_->size()},
                    {"clusters", clusters},
                    {"palette", palette},
                    {"empty_color", kEmptyColor}}
                   .dump()};
}

HttpServer::HttpServer(LayoutService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  // httplib defaults to SO_REUSEPORT, which lets a second server share the port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  const auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  const auto node_param = [](const httplib::Request& req) {
    return req.has_param("node") ? req.get_param_value("node") : std::string("root");
  };
  server_->Get("/api/layout", [this, reply, node_param](const httplib::Request& req, httplib::Response& res) {
    reply(res, service_.get_layout(node_param(req)));
  });
  server_->Get("/api/measures", [this, reply, node_param](const httplib::Request& req, httplib::Response& res) {
    reply(res, service_.measures(node_param(req)));
  });
  server_->Get("/api/config", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service_.config());
  });
  server_->Post("/api/zoom", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service_.zoom(req.body));
  });
  server_->set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty())
      reply(res, error_response(404, "not_found", "no route for " + req.method + " " + req.path));
  });
  server_->set_exception_handler([reply](const httplib::Request&, httplib::Response& res,
                                         std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      reply(res, error_response(500, "internal_error", e.what()));
    } catch (...) {
      reply(res, error_response(500, "internal_error", "unknown failure"));
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error("bind_failed", "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port))
    throw Error("bind_failed", "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

} // namespace gridweave
