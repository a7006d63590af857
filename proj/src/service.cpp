#include "sqlsmell/service.hpp"

#include "sqlsmell/pipeline.hpp"

#include "httplib.h"
#include "json.hpp"

namespace sqlsmell {

using nlohmann::json;

namespace {

HttpResponse error(int status, std::string message) {
  return {status, json{{"error", std::move(message)}}.dump() + "\n"};
}

}  // namespace

HttpResponse handle_check(std::string_view body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return error(400, std::string("malformed JSON: ") + e.what());
  }
  if (!request.is_object() || !request.contains("query")) return error(400, "missing field: query");
  if (!request["query"].is_string()) return error(400, "field query must be a string");

  AnalysisOptions options;
  options.detect.inter = false;
  options.detect.data = false;
  try {
    if (request.contains("config")) {
      const json& cfg = request["config"];
      if (!cfg.is_object()) return error(400, "field config must be an object");
      if (cfg.contains("preset")) {
        if (!cfg["preset"].is_string()) return error(400, "config.preset must be a string");
        options.ranking = preset(cfg["preset"].get<std::string>());
      }
      if (cfg.contains("weights")) {
        if (!cfg["weights"].is_object()) return error(400, "config.weights must be an object");
        KeyValues kv;
        for (const auto& [k, v] : cfg["weights"].items()) {
          if (!v.is_number()) return error(400, "config.weights." + k + " must be a number");
          kv.emplace_back("w_" + k, v.dump());
        }
        apply_weights(options.ranking, kv);
        normalize_weights(options.ranking);
      }
    }
  } catch (const ConfigError& e) {
    return error(400, e.what());
  }

  auto statements = split_statements(request["query"].get<std::string>(), "query");
  Analysis a = analyze(std::move(statements), nullptr, options);
  Report report;
  report.plans = std::move(a.plans);
  report.ranking = options.ranking;
  report.thresholds = options.build;
  report.warnings = a.ctx.warnings;
  return {200, emit_report(report, ReportFormat::Json)};
}

struct Server::Impl {
  httplib::Server http;
};

Server::Server() : impl_(std::make_unique<Impl>()) {
  impl_->http.Post("/api/check", [](const httplib::Request& req, httplib::Response& res) {
    HttpResponse r = handle_check(req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen() { return impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace sqlsmell
