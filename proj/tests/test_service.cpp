#include "sqlsmell/service.hpp"

#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"
#include "json.hpp"

using namespace sqlsmell;
using nlohmann::json;

TEST(Service, PaperExample) {
  auto r = handle_check(R"j({"query":"INSERT INTO Users VALUES (1,'foo')"})j");
  ASSERT_EQ(r.status, 200) << r.body;
  auto j = json::parse(r.body);
  bool found = false;
  for (const auto& f : j["findings"]) found |= f["kind"] == "ImplicitColumns";
  EXPECT_TRUE(found);
}

TEST(Service, CleanQuery) {
  auto r = handle_check(R"j({"query":"SELECT a FROM t"})j");
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(json::parse(r.body)["findings"].empty());
}

TEST(Service, BadRequests) {
  auto r = handle_check("{}");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(json::parse(r.body)["error"], "missing field: query");
  EXPECT_EQ(handle_check("{not json").status, 400);
  EXPECT_EQ(handle_check(R"j({"query": 5})j").status, 400);
  EXPECT_EQ(handle_check(R"j({"query": "x", "config": {"preset": "C7"}})j").status, 400);
  EXPECT_EQ(handle_check(R"j({"query": "x", "config": {"weights": {"zz": 1}}})j").status, 400);
}

TEST(Service, ConfigAndStatelessness) {
  std::string body = R"j({"query":"SELECT * FROM t ORDER BY RAND()","config":{"preset":"C2"}})j";
  auto a = handle_check(body);
  auto b = handle_check(body);
  ASSERT_EQ(a.status, 200);
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(json::parse(a.body)["config"]["preset"], "C2");
  auto w = handle_check(R"j({"query":"SELECT 1","config":{"weights":{"rp":1,"wp":1,"m":0,"da":0,"di":0,"a":0}}})j");
  ASSERT_EQ(w.status, 200) << w.body;
  EXPECT_DOUBLE_EQ(json::parse(w.body)["config"]["weights"]["rp"].get<double>(), 0.5);
}

TEST(Service, LiveServer) {
  Server server;
  int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen(); });
  httplib::Client cli("127.0.0.1", port);
  auto ok = cli.Post("/api/check", R"j({"query":"INSERT INTO Users VALUES (1,'foo')"})j", "application/json");
  auto bad = cli.Post("/api/check", "{}", "application/json");
  auto missing = cli.Get("/api/check");
  server.stop();
  t.join();
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  EXPECT_NE(ok->body.find("ImplicitColumns"), std::string::npos);
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  ASSERT_TRUE(missing);
  EXPECT_NE(missing->status, 200);
}
