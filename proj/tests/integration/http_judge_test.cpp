#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "laughboard/judge/http_transport.hpp"
#include "laughboard/judge/llm_judge.hpp"
#include "laughboard/judge/prompt.hpp"

using namespace laughboard;
using namespace laughboard::judge;
using nlohmann::json;

namespace {

constexpr const char* kVerdict =
    R"({"reasoning": "sharper", "decision": "B", "winner_humor_features": ["irony"], )"
    R"("winner_delivery_features": ["deadpan"], "loser_features": ["overexplained"], "confidence": "high"})";

// Chat-completion stand-in on a loopback port.
class MockServer {
 public:
  MockServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      {
        std::lock_guard lock(mu_);
        last_body = req.body;
        last_auth = req.get_header_value("Authorization");
      }
      if (status != 200) {
        res.status = status;
        res.set_content("overloaded", "text/plain");
        return;
      }
      json reply = {{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}};
      res.set_content(raw_body.empty() ? reply.dump() : raw_body, "application/json");
    });
    port = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1"; }

  int port = 0;
  std::atomic<int> hits{0};
  int status = 200;
  std::string content = kVerdict;
  std::string raw_body;
  std::string last_body;
  std::string last_auth;

 private:
  std::mutex mu_;
  httplib::Server server_;
  std::thread thread_;
};

JudgeConfig config_for(const MockServer& server) {
  JudgeConfig c;
  c.judge_id = "http-judge";
  c.kind = JudgeKind::kLlmHttp;
  c.endpoint_url = server.url();
  c.model_name = "judge-70b";
  c.auth_env_var = "LB_TEST_JUDGE_TOKEN";
  return c;
}

HttpTransportOptions transport_for(const JudgeConfig& c) {
  HttpTransportOptions o;
  o.endpoint_url = *c.endpoint_url;
  o.auth_env_var = c.auth_env_var;
  o.timeout_seconds = 5.0;
  return o;
}

const PromptItem kPrompt{"p1", "Robots unionize", TaskKind::kHeadline};
const Generation kGenA{"m0", "p1", "joke zero"};
const Generation kGenB{"m1", "p1", "joke one"};

class HttpJudge : public ::testing::Test {
 protected:
  void SetUp() override { ::setenv("LB_TEST_JUDGE_TOKEN", "sk-test-0451", 1); }
};

}  // namespace

TEST_F(HttpJudge, SendsChatCompletionAndParsesReply) {
  MockServer server;
  const auto cfg = config_for(server);
  const LlmJudge judge(cfg, std::make_shared<HttpChatTransport>(transport_for(cfg)), [](double) {});
  const auto adj = judge.adjudicate(kPrompt, kGenA, kGenB, 3);
  ASSERT_FALSE(adj.aborted) << adj.error;
  EXPECT_EQ(adj.verdict.decision, adj.swapped ? Decision::kA : Decision::kB);
  EXPECT_EQ(adj.verdict.confidence, Confidence::kHigh);
  EXPECT_EQ(server.last_auth, "Bearer sk-test-0451");

  const auto body = json::parse(server.last_body);
  EXPECT_EQ(body["model"], "judge-70b");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.1);
  EXPECT_EQ(body["max_tokens"], 512);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][0]["content"], std::string(system_prompt()));
  EXPECT_EQ(body["messages"][1]["role"], "user");
  const auto shown = adj.swapped ? render_prompt(kPrompt.text, kGenB.text, kGenA.text)
                                 : render_prompt(kPrompt.text, kGenA.text, kGenB.text);
  EXPECT_EQ(body["messages"][1]["content"], shown.user_text);
}

TEST_F(HttpJudge, TraceLogRedactsTheToken) {
  MockServer server;
  const auto cfg = config_for(server);
  std::ostringstream log;
  auto opts = transport_for(cfg);
  opts.trace = true;
  opts.logger = std::make_shared<spdlog::logger>("trace", std::make_shared<spdlog::sinks::ostream_sink_mt>(log));
  HttpChatTransport transport(opts);
  transport.complete(ChatRequest{"judge-70b", "sys", "user", 0.1, 512});
  EXPECT_NE(log.str().find("Bearer ***"), std::string::npos);
  EXPECT_NE(log.str().find("\"max_tokens\":512"), std::string::npos);
  EXPECT_NE(log.str().find("HTTP 200"), std::string::npos);
  EXPECT_EQ(log.str().find("sk-test-0451"), std::string::npos);
}

TEST_F(HttpJudge, ServerErrorsAreRetriedThenAborted) {
  MockServer server;
  server.status = 503;
  const auto cfg = config_for(server);
  std::vector<double> sleeps;
  const LlmJudge judge(cfg, std::make_shared<HttpChatTransport>(transport_for(cfg)),
                       [&](double s) { sleeps.push_back(s); });
  const auto adj = judge.adjudicate(kPrompt, kGenA, kGenB, 3);
  EXPECT_TRUE(adj.aborted);
  EXPECT_EQ(server.hits.load(), 4);
  EXPECT_EQ(sleeps, (std::vector<double>{2.0, 4.0, 4.0}));
  EXPECT_NE(adj.error.find("HTTP 503"), std::string::npos);
}

TEST_F(HttpJudge, ProtocolFailuresAreTransportErrors) {
  MockServer server;
  HttpChatTransport transport(transport_for(config_for(server)));
  const ChatRequest req{"m", "s", "u", 0.1, 8};
  server.raw_body = "not json";
  EXPECT_THROW(transport.complete(req), TransportError);
  server.raw_body = R"({"choices": []})";
  EXPECT_THROW(transport.complete(req), TransportError);

  HttpTransportOptions closed;
  closed.endpoint_url = "http://127.0.0.1:1/v1";
  closed.timeout_seconds = 2.0;
  EXPECT_THROW(HttpChatTransport(closed).complete(req), TransportError);
}

TEST_F(HttpJudge, EndpointAndCredentialChecks) {
  HttpTransportOptions o;
  o.endpoint_url = "https://api.example.com/v1/";
  HttpChatTransport t(o);
  EXPECT_EQ(t.origin(), "https://api.example.com");
  EXPECT_EQ(t.path(), "/v1/chat/completions");
  o.endpoint_url = "http://h:8080/chat/completions";
  EXPECT_EQ(HttpChatTransport(o).path(), "/chat/completions");
  o.endpoint_url = "localhost:8080";
  EXPECT_THROW(HttpChatTransport{o}, ValidationError);
  o.endpoint_url = "http://h";
  o.auth_env_var = "LB_TEST_UNSET_VARIABLE";
  ::unsetenv("LB_TEST_UNSET_VARIABLE");
  EXPECT_THROW(HttpChatTransport{o}, ValidationError);
}
