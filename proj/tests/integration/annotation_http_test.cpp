#include <gtest/gtest.h>

#include <httplib.h>

#include "annotation_setup.hpp"
#include "laughboard/core/random.hpp"

using namespace laughboard;
using namespace laughboard::app::annotation;
using nlohmann::json;

namespace {

// Client that keeps every response body so the blindness scan sees them all.
class Recorder {
 public:
  explicit Recorder(int port) : client_("127.0.0.1", port) {}

  httplib::Result get(const std::string& path) { return keep(client_.Get(path)); }
  httplib::Result post(const std::string& path, const json& body) {
    return keep(client_.Post(path, body.dump(), "application/json"));
  }
  httplib::Result post_raw(const std::string& path, const std::string& body) {
    return keep(client_.Post(path, body, "application/json"));
  }
  httplib::Result options(const std::string& path) {
    httplib::Headers h{{"Origin", "http://ui.local"}, {"Access-Control-Request-Method", "POST"}};
    return keep(client_.Options(path, h));
  }

  const std::vector<std::string>& bodies() const { return bodies_; }
  const std::vector<httplib::Headers>& headers() const { return headers_; }

 private:
  httplib::Result keep(httplib::Result r) {
    if (r) {
      bodies_.push_back(r->body);
      headers_.push_back(r->headers);
    }
    return r;
  }

  httplib::Client client_;
  std::vector<std::string> bodies_;
  std::vector<httplib::Headers> headers_;
};

class AnnotationHttp : public ::testing::Test {
 protected:
  void SetUp() override {
    run_ = std::make_unique<lbtest::AnnotatedRun>(lbtest::annotated_run(dir_.path(), 5, 14));
    store_ = std::make_shared<AnnotationStore>(sample_units(run_->graph, run_->dataset, 60, 11), 11,
                                               dir_.path() / "votes.jsonl");
    ServerOptions options;
    options.allowed_origin = "http://ui.local";
    server_ = std::make_unique<AnnotationServer>(store_, options);
    port_ = server_->bind("127.0.0.1", 0);
    server_->start();
    client_ = std::make_unique<Recorder>(port_);
  }

  void TearDown() override {
    server_->stop();
    // Blind protocol: no response may name a model.
    for (const auto& body : client_->bodies()) {
      for (const auto& m : run_->model_ids) ASSERT_EQ(body.find(m), std::string::npos) << body;
    }
    for (const auto& h : client_->headers()) {
      for (const auto& [key, value] : h) {
        for (const auto& m : run_->model_ids) ASSERT_EQ(value.find(m), std::string::npos) << key;
      }
    }
  }

  std::string open(const std::string& annotator) {
    const auto r = client_->post("/sessions", {{"annotator_id", annotator}});
    EXPECT_EQ(r->status, 201);
    return json::parse(r->body).at("session_id").get<std::string>();
  }

  // Votes until the server says 204; `choose` sees the presented pair.
  template <class Choose>
  int vote_all(const std::string& session, Choose choose) {
    int n = 0;
    while (true) {
      const auto next = client_->get("/sessions/" + session + "/next");
      if (next->status == 204) break;
      EXPECT_EQ(next->status, 200);
      const auto view = json::parse(next->body);
      EXPECT_EQ(view.size(), 4u);
      const auto r = client_->post("/sessions/" + session + "/votes",
                                   {{"unit_id", view.at("unit_id")}, {"choice", choose(view)}});
      EXPECT_EQ(r->status, 200);
      EXPECT_EQ(json::parse(r->body).at("accepted"), true);
      ++n;
    }
    return n;
  }

  lbtest::TempDir dir_{"annotation_http"};
  std::unique_ptr<lbtest::AnnotatedRun> run_;
  std::shared_ptr<AnnotationStore> store_;
  std::unique_ptr<AnnotationServer> server_;
  std::unique_ptr<Recorder> client_;
  int port_ = 0;
};

// Content-based choice, so two scripted annotators agree whatever order the
// server shows the options in.
std::string prefer_by_hash(const json& view) {
  const auto a = rng::hash_string(view.at("option_a").get<std::string>());
  const auto b = rng::hash_string(view.at("option_b").get<std::string>());
  return a < b ? "A" : "B";
}

}  // namespace

TEST_F(AnnotationHttp, AgreeingSessionsGiveAlphaOne) {
  EXPECT_EQ(vote_all(open("ann-1"), prefer_by_hash), 60);
  EXPECT_EQ(vote_all(open("ann-2"), prefer_by_hash), 60);
  const auto stats = json::parse(client_->get("/stats")->body);
  EXPECT_EQ(stats.at("votes"), 120);
  EXPECT_EQ(stats.at("raw_agreement"), 1.0);
  EXPECT_EQ(stats.at("alpha"), 1.0);
  EXPECT_FALSE(stats.at("alpha_degenerate").get<bool>());
}

TEST_F(AnnotationHttp, MixedSessionsMatchIndependentAlpha) {
  rng::Engine e(3);
  const char* labels[] = {"A", "B", "TIE"};
  stats::AnnotationTable mine;
  const auto canonical_text = [&](const std::string& unit_id, const std::string& text) {
    for (const auto& u : store_->units()) {
      if (u.unit_id == unit_id) return text == u.joke_a ? Decision::kA : Decision::kB;
    }
    ADD_FAILURE() << "unit " << unit_id;
    return Decision::kTie;
  };
  for (const char* who : {"p1", "p2", "p3"}) {
    vote_all(open(who), [&](const json& view) {
      const std::string pick = labels[e.below(3)];
      const auto unit = view.at("unit_id").get<std::string>();
      Decision d = Decision::kTie;
      if (pick != "TIE") d = canonical_text(unit, view.at(pick == "A" ? "option_a" : "option_b").get<std::string>());
      mine.add(unit, who, d);
      return pick;
    });
  }
  const auto stats = json::parse(client_->get("/stats")->body);
  EXPECT_EQ(stats.at("votes"), 180);
  EXPECT_EQ(stats.at("alpha").get<double>(), *stats::krippendorff_alpha(mine).alpha);
  EXPECT_EQ(stats.at("raw_agreement").get<double>(), *stats::percent_agreement(mine));
}

TEST_F(AnnotationHttp, ErrorsAndCors) {
  const auto session = open("ann");
  const auto unit = json::parse(client_->get("/sessions/" + session + "/next")->body).at("unit_id").get<std::string>();
  EXPECT_EQ(client_->get("/sessions/nope/next")->status, 404);
  EXPECT_EQ(client_->post("/sessions/" + session + "/votes", {{"unit_id", "u0"}, {"choice", "A"}})->status, 404);
  EXPECT_EQ(client_->post("/sessions/" + session + "/votes", {{"unit_id", unit}, {"choice", "C"}})->status, 400);
  EXPECT_EQ(client_->post("/sessions/" + session + "/votes", {{"unit_id", unit}})->status, 400);
  EXPECT_EQ(client_->post_raw("/sessions", "{not json")->status, 400);
  EXPECT_EQ(client_->post("/sessions", {{"annotator_id", ""}})->status, 400);
  EXPECT_EQ(client_->post("/sessions/" + session + "/votes", {{"unit_id", unit}, {"choice", "A"}})->status, 200);
  const auto dup = client_->post("/sessions/" + session + "/votes", {{"unit_id", unit}, {"choice", "A"}});
  EXPECT_EQ(dup->status, 200);
  EXPECT_TRUE(json::parse(dup->body).at("duplicate").get<bool>());
  EXPECT_EQ(client_->post("/sessions/" + session + "/votes", {{"unit_id", unit}, {"choice", "B"}})->status, 409);
  const auto progress = json::parse(dup->body).at("progress");
  EXPECT_EQ(progress.at("answered"), 1);
  EXPECT_EQ(progress.at("total"), 60);

  const auto pre = client_->options("/sessions/" + session + "/votes");
  EXPECT_EQ(pre->status, 204);
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Headers"), "Content-Type");
  const auto instructions = client_->get("/instructions");
  EXPECT_EQ(instructions->status, 200);
  EXPECT_FALSE(json::parse(instructions->body).at("text").get<std::string>().empty());
  for (const auto& h : client_->headers()) {
    const auto it = h.find("Access-Control-Allow-Origin");
    ASSERT_NE(it, h.end());
    EXPECT_EQ(it->second, "http://ui.local");
  }
}

TEST(AnnotationServerBind, BusyPortIsAnError) {
  lbtest::TempDir dir("busy");
  const auto run = lbtest::annotated_run(dir.path());
  auto store = std::make_shared<AnnotationStore>(sample_units(run.graph, run.dataset, 5, 1), 1);
  AnnotationServer first(store);
  const int port = first.bind("127.0.0.1", 0);
  AnnotationServer second(store);
  EXPECT_THROW(second.bind("127.0.0.1", port), Error);
}
