// ---------------------------------------------------------------------------
// service.hpp
//
// POST /api/check  {"query": "...", "config": {"preset": "C2", "weights": {...}}}
// -> the report JSON (single-statement context, intra-query detection).
// ---------------------------------------------------------------------------
#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace sqlsmell {

struct HttpResponse {
  int status = 200;
  std::string body;
};

HttpResponse handle_check(std::string_view body);

class Server {
 public:
  Server();
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Port 0 binds any free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sqlsmell
