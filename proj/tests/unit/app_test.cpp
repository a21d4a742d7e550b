#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <iterator>
#include <set>
#include <sstream>

#include "arena.hpp"
#include "fixtures.hpp"
#include "laughboard/app/orchestrator.hpp"
#include "laughboard/app/report.hpp"
#include "laughboard/app/simulate.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/random.hpp"
#include "laughboard/judge/oracle_judge.hpp"
#include "laughboard/judge/prompt.hpp"

using namespace laughboard;
using namespace laughboard::app;
using lbtest::arena_config;
using lbtest::TempDir;
using nlohmann::json;

namespace {

RunOptions quiet() {
  RunOptions o;
  o.write_report = false;
  return o;
}

// Aborts every call after the first `healthy` ones.
class FailingJudge final : public judge::Judge {
 public:
  FailingJudge(const TournamentConfig& c, int healthy) : inner_(make_judge(c)), healthy_(healthy) {}
  const std::string& judge_id() const override { return inner_->judge_id(); }
  judge::Adjudication adjudicate(const PromptItem& p, const Generation& a, const Generation& b,
                                 std::uint64_t seed) const override {
    if (calls_++ < healthy_) return inner_->adjudicate(p, a, b, seed);
    judge::Adjudication out;
    out.aborted = true;
    out.error = "connection refused";
    return out;
  }

 private:
  std::unique_ptr<judge::Judge> inner_;
  int healthy_;
  mutable std::atomic<int> calls_{0};
};

}  // namespace

// Config

TEST(Config, DefaultHyperparameters) {
  const RatingConfig r;
  EXPECT_EQ(r.k_factor, 32.0);
  EXPECT_EQ(r.initial, 1000.0);
  EXPECT_EQ(r.bt_epsilon, 1e-6);
  EXPECT_EQ(r.bootstrap_iterations, 100);
  EXPECT_EQ(r.stable_shuffles, 10);
  const judge::JudgeConfig j;
  EXPECT_EQ(j.temperature, 0.1);
  EXPECT_EQ(j.max_new_tokens, 512);
  const TournamentConfig t;
  EXPECT_EQ(t.scheduler.min_rounds_per_model, 2);
  EXPECT_EQ(t.scheduler.max_rounds_per_model, 3);
  EXPECT_TRUE(t.scheduler.exhaustive);
}

TEST(Config, ParsesMinimalFileAndResolvesPaths) {
  const json j = json::parse(R"({
    "models": [{"model_id": "a", "latent_rating": 1100}, {"model_id": "b", "latent_rating": 900}],
    "prompts_path": "data/p.jsonl", "generations_path": "/abs/g.jsonl", "seed": 9
  })");
  const auto c = config_from_json(j, "/base");
  EXPECT_EQ(c.prompts_path, std::filesystem::path("/base/data/p.jsonl"));
  EXPECT_EQ(c.generations_path, std::filesystem::path("/abs/g.jsonl"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/base/out"));
  EXPECT_EQ(c.models[1].display_name, "b");
  EXPECT_TRUE(c.scheduler.exhaustive);
  EXPECT_EQ(c.seed, 9u);

  const auto llm = config_from_json(json::parse(R"({
    "models": ["a", "b"], "judge": {"kind": "llm", "endpoint_url": "http://x/v1", "model_name": "j"},
    "scheduler": {"c_max": 40}
  })"));
  EXPECT_EQ(llm.judge.kind, judge::JudgeKind::kLlmHttp);
  EXPECT_FALSE(llm.scheduler.exhaustive);
  EXPECT_EQ(llm.scheduler.c_max, 40);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  const auto bad = [](const char* text) { return config_from_json(json::parse(text)); };
  EXPECT_THROW(bad(R"({"models": ["a", "b"], "judge": {"kind": "llm", "endpoint_url": "http://x", "model_name": "j"},
                       "ratings": {}})"),
               ValidationError);
  EXPECT_THROW(bad(R"({"models": ["a", "b"], "judge": {"kind": "llm", "endpont_url": "http://x"}})"), ValidationError);
  EXPECT_THROW(bad(R"({"models": ["a"], "judge": {"kind": "llm", "endpoint_url": "http://x", "model_name": "j"}})"),
               ValidationError);
  EXPECT_THROW(bad(R"({"models": ["a", "a"], "judge": {"kind": "llm", "endpoint_url": "http://x", "model_name": "j"}})"),
               ValidationError);
  // The oracle needs ground truth.
  EXPECT_THROW(bad(R"({"models": ["a", "b"]})"), ValidationError);
  EXPECT_THROW(bad(R"({"models": [{"model_id": "a", "latent_rating": 1}, {"model_id": "b", "latent_rating": 2}],
                       "seed": "seven"})"),
               ValidationError);
  EXPECT_THROW(bad(R"({"models": [{"model_id": "a", "latent_rating": 1}, {"model_id": "b", "latent_rating": 2}],
                       "scheduler": {"c_max": -3}})"),
               ValidationError);
}

TEST(Config, JsonRoundTripAndHash) {
  TempDir dir("config");
  auto c = arena_config(dir.path(), 3, 2);
  c.scheduler.exhaustive = false;
  c.scheduler.c_max = 17;
  c.judge.max_retries = 5;
  const auto back = config_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(back.models, c.models);
  EXPECT_EQ(back.judge, c.judge);
  EXPECT_EQ(back.rating, c.rating);
  EXPECT_EQ(back.oracle, c.oracle);
  EXPECT_EQ(back.scheduler.c_max, 17);
  EXPECT_FALSE(back.scheduler.exhaustive);
  EXPECT_EQ(config_hash(back), config_hash(c));
  c.seed += 1;
  EXPECT_NE(config_hash(back), config_hash(c));
  // FIPS 180-2 test vector.
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// Dataset

TEST(Dataset, FullGridHasEveryGeneration) {
  std::vector<std::string> ids;
  for (int i = 0; i < 9; ++i) ids.push_back(lbtest::model_name(i));
  const auto d = make_dataset(lbtest::arena_prompts(300), lbtest::arena_generations(9, 300), ids);
  EXPECT_EQ(d.generations.size(), 2700u);
  EXPECT_TRUE(d.missing.empty());
  EXPECT_TRUE(d.eligibility().empty());
}

TEST(Dataset, MissingGenerationIsReportedAndSkipped) {
  TempDir dir("missing");
  auto c = arena_config(dir.path(), 3, 3);
  auto gens = lbtest::arena_generations(3, 3);
  std::erase_if(gens, [](const Generation& g) { return g.model_id == "m1" && g.prompt_id == "p0001"; });
  lbtest::write_text(c.generations_path, to_jsonl(gens));
  const auto run = run_tournament(c, quiet());
  EXPECT_TRUE(run.play.complete);
  for (const auto& r : run.graph.records()) {
    EXPECT_FALSE(r.prompt_id == "p0001" && (r.side_a_model == "m1" || r.side_b_model == "m1"));
  }
  // Pairs with m1 lose one prompt; m0-m2 keeps all three.
  EXPECT_EQ(run.graph.records().size(), 3u + 2u + 2u);
  const std::vector<std::string> ids{"m0", "m1", "m2"};
  const auto d = ingest_dataset(c.prompts_path, c.generations_path, ids);
  ASSERT_EQ(d.missing.size(), 1u);
  EXPECT_EQ(d.missing[0], (std::pair<std::string, std::string>{"m1", "p0001"}));
}

TEST(Dataset, MalformedLineIsNamed) {
  TempDir dir("malformed");
  std::string text = to_jsonl(lbtest::arena_prompts(16));
  text += "{\"prompt_id\": \"p9\", \"text\": \n";
  lbtest::write_text(dir.path() / "prompts.jsonl", text);
  lbtest::write_text(dir.path() / "gens.jsonl", "");
  try {
    ingest_dataset(dir.path() / "prompts.jsonl", dir.path() / "gens.jsonl", {});
    FAIL() << "expected a FormatError";
  } catch (const FormatError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 17"), std::string::npos) << what;
    EXPECT_NE(what.find("prompts.jsonl"), std::string::npos) << what;
  }
  try {
    parse_generations("\n\n{\"model_id\": \"m0\", \"prompt_id\": 3, \"text\": \"x\"}\n");
    FAIL() << "expected a FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Dataset, DuplicatesAndStrayRecordsAreErrors) {
  EXPECT_THROW(parse_generations("{\"model_id\":\"a\",\"prompt_id\":\"p\",\"text\":\"x\"}\n"
                                 "{\"model_id\":\"a\",\"prompt_id\":\"p\",\"text\":\"y\"}\n"),
               FormatError);
  EXPECT_THROW(parse_prompts("{\"prompt_id\":\"p\",\"text\":\"x\"}\n{\"prompt_id\":\"p\",\"text\":\"y\"}\n"), FormatError);
  EXPECT_THROW(parse_prompts("{\"prompt_id\":\"p\",\"text\":\"x\",\"lang\":\"en\"}\n"), FormatError);
  EXPECT_THROW(parse_prompts("{\"prompt_id\":\"p\",\"text\":\"x\",\"task_kind\":\"limerick\"}\n"), FormatError);
  EXPECT_THROW(parse_prompts("[1, 2]\n"), FormatError);
  const std::vector<std::string> ids{"a"};
  EXPECT_THROW(make_dataset(parse_prompts("{\"prompt_id\":\"p\",\"text\":\"x\"}\n"),
                            parse_generations("{\"model_id\":\"a\",\"prompt_id\":\"q\",\"text\":\"x\"}\n"), ids),
               ValidationError);
  // Generations by models outside the tournament are counted, not fatal.
  const auto d = make_dataset(parse_prompts("{\"prompt_id\":\"p\",\"text\":\"x\"}\n"),
                              parse_generations("{\"model_id\":\"z\",\"prompt_id\":\"p\",\"text\":\"x\"}\n"), ids);
  EXPECT_EQ(d.ignored_generations, 1);
  EXPECT_EQ(d.missing.size(), 1u);
}

TEST(Dataset, JsonlRoundTrip) {
  auto prompts = lbtest::arena_prompts(4);
  prompts[2].task_kind = TaskKind::kWordCombination;
  prompts[3].text = "quotes \" and \\ and é";
  const auto back = parse_prompts(to_jsonl(prompts));
  ASSERT_EQ(back.size(), prompts.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].prompt_id, prompts[i].prompt_id);
    EXPECT_EQ(back[i].text, prompts[i].text);
    EXPECT_EQ(back[i].task_kind, prompts[i].task_kind);
  }
  const auto gens = lbtest::arena_generations(2, 2);
  EXPECT_EQ(to_jsonl(parse_generations(to_jsonl(gens))), to_jsonl(gens));
}

// Orchestrator

TEST(Run, ExhaustiveNineModelLedger) {
  TempDir dir("nine");
  auto c = arena_config(dir.path(), 9, 300);
  c.oracle.tie_probability = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = run_tournament(c, quiet());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_TRUE(run.play.complete);
  EXPECT_EQ(run.play.appended, 10800);
  EXPECT_EQ(ledger::read_records(run.ledger_path).records.size(), 10800u);
  for (int i = 0; i < 9; ++i) {
    for (int j = i + 1; j < 9; ++j) EXPECT_EQ(run.graph.pair_count(i, j), 300);
  }
  EXPECT_LT(secs, 30.0);
}

TEST(Run, TrackingEloFollowsLedgerOrder) {
  TempDir dir("elo");
  const auto c = arena_config(dir.path(), 5, 6);
  const auto run = run_tournament(c, quiet());
  std::map<std::string, double> r;
  for (const auto& m : c.models) r[m.model_id] = 1000.0;
  for (const auto& rec : run.graph.records()) {
    const double ea = 1.0 / (1.0 + std::pow(10.0, (r[rec.side_b_model] - r[rec.side_a_model]) / 400.0));
    const double delta = 32.0 * (rec.score_for_a - ea);
    EXPECT_NEAR(rec.elo_delta_a, delta, 1e-9) << rec.match_id;
    r[rec.side_a_model] += delta;
    r[rec.side_b_model] -= delta;
  }
}

TEST(Run, ResumeAfterInterruptMatchesUninterrupted) {
  TempDir dir("resume");
  auto c = arena_config(dir.path(), 5, 8);
  c.judge.max_in_flight = 3;
  run_tournament(c, quiet());
  const auto reference = lbtest::without_timestamps(ledger_path_in(c.output_dir));
  const auto total = static_cast<std::int64_t>(ledger::read_records(ledger_path_in(c.output_dir)).records.size());
  ASSERT_EQ(total, 80);

  rng::Engine e(99);
  for (int t = 0; t < 5; ++t) {
    const auto cut = 1 + static_cast<std::int64_t>(e.below(static_cast<std::uint64_t>(total - 1)));
    std::filesystem::remove_all(c.output_dir);
    auto o = quiet();
    o.stop_after_records = cut;
    const auto first = run_tournament(c, o);
    EXPECT_TRUE(first.play.interrupted);
    EXPECT_EQ(first.play.appended, cut);
    const auto second = run_tournament(c, quiet());
    EXPECT_EQ(second.play.replayed, cut);
    EXPECT_TRUE(second.play.complete);
    EXPECT_EQ(lbtest::without_timestamps(ledger_path_in(c.output_dir)), reference) << "cut at " << cut;
  }
}

TEST(Run, TornTailIsDroppedOnResume) {
  TempDir dir("torn");
  const auto c = arena_config(dir.path(), 4, 4);
  run_tournament(c, quiet());
  const auto path = ledger_path_in(c.output_dir);
  const auto reference = lbtest::without_timestamps(path);
  const auto full = lbtest::read_text(path);
  // Keep ten whole lines and half of the eleventh.
  std::size_t pos = 0;
  for (int i = 0; i < 10; ++i) pos = full.find('\n', pos) + 1;
  lbtest::write_text(path, full.substr(0, pos + 40));
  const auto run = run_tournament(c, quiet());
  EXPECT_EQ(run.play.replayed, 10);
  EXPECT_EQ(lbtest::without_timestamps(path), reference);
}

TEST(Run, WorkerCountDoesNotChangeLedger) {
  TempDir a("serial"), b("parallel");
  auto ca = arena_config(a.path(), 6, 5, 4);
  auto cb = arena_config(b.path(), 6, 5, 4);
  ca.judge.max_in_flight = 1;
  cb.judge.max_in_flight = 4;
  run_tournament(ca, quiet());
  run_tournament(cb, quiet());
  EXPECT_EQ(lbtest::without_timestamps(ledger_path_in(ca.output_dir)),
            lbtest::without_timestamps(ledger_path_in(cb.output_dir)));
}

TEST(Run, ZeroBudgetLeavesEmptyLedgerAndNoReport) {
  TempDir dir("zero");
  auto c = arena_config(dir.path(), 3, 2);
  c.scheduler.exhaustive = false;
  c.scheduler.c_max = 0;
  const auto run = run_tournament(c);
  EXPECT_TRUE(run.play.complete);
  EXPECT_EQ(run.play.appended, 0);
  EXPECT_EQ(std::filesystem::file_size(run.ledger_path), 0u);
  EXPECT_FALSE(run.report_dir);
  EXPECT_NE(run.report_note.find("nothing to fit"), std::string::npos);
  EXPECT_THROW(build_report(run.graph, {}, make_run_manifest(c)), ValidationError);
}

TEST(Run, ForeignLedgerIsRejected) {
  TempDir dir("foreign");
  auto c = arena_config(dir.path(), 4, 3);
  run_tournament(c, quiet());
  auto other_seed = c;
  other_seed.seed = 2;
  EXPECT_THROW(run_tournament(other_seed, quiet()), ValidationError);
  auto other_judge = c;
  other_judge.judge.judge_id = "oracle-2";
  EXPECT_THROW(run_tournament(other_judge, quiet()), ValidationError);
  // A record edited on disk no longer fits the replayed schedule.
  const auto path = ledger_path_in(c.output_dir);
  const auto original = lbtest::read_text(path);
  auto records = ledger::read_records(path).records;
  records[3].prompt_id = records[3].prompt_id == "p0000" ? "p0002" : "p0000";
  std::string edited;
  for (const auto& r : records) edited += ledger::serialize_record(r) + '\n';
  lbtest::write_text(path, edited);
  EXPECT_THROW(run_tournament(c, quiet()), FormatError);
  lbtest::write_text(path, original);
  auto other_models = c;
  other_models.models.pop_back();
  EXPECT_THROW(run_tournament(other_models, quiet()), ValidationError);
  // The original still resumes cleanly.
  EXPECT_EQ(run_tournament(c, quiet()).play.appended, 0);
}

TEST(Run, FailingJudgeHaltsAndLaterResumes) {
  TempDir dir("halt");
  auto c = arena_config(dir.path(), 4, 5);
  c.judge.max_in_flight = 1;
  const FailingJudge flaky(c, 7);
  const auto halted = run_tournament(c, flaky, quiet());
  EXPECT_TRUE(halted.play.halted);
  EXPECT_FALSE(halted.play.complete);
  const auto records = ledger::read_records(halted.ledger_path).records;
  ASSERT_GE(records.size(), 9u);
  EXPECT_EQ(std::count_if(records.begin(), records.end(), [](const MatchRecord& r) { return !r.tombstone; }), 7);
  EXPECT_TRUE(records.back().tombstone);

  const auto healed = run_tournament(c, quiet());
  EXPECT_TRUE(healed.play.complete);
  EXPECT_EQ(healed.play.replayed, static_cast<std::int64_t>(records.size()));
  // A slot that aborted twice is dropped; every other slot got played.
  int dropped = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      int pair_dropped = 0;
      for (int p = 0; p < 5; ++p) pair_dropped += healed.graph.aborted_count(i, j, p) >= 2;
      EXPECT_EQ(healed.graph.coverage(lbtest::model_name(i), lbtest::model_name(j)).total + pair_dropped, 5);
      dropped += pair_dropped;
    }
  }
  EXPECT_LE(dropped, static_cast<int>(halted.play.aborted) / 2);
}

TEST(Run, EndToEndDeterminism) {
  TempDir dir("determinism");
  const auto c = arena_config(dir.path(), 5, 4);
  RunOptions o;
  o.clock = [] { return std::string("T"); };
  const auto first = run_tournament(c, o);
  ASSERT_TRUE(first.report_dir);
  const auto ledger1 = lbtest::read_text(first.ledger_path);
  const auto report1 = lbtest::read_text(*first.report_dir / "report.json");
  const auto heat1 = lbtest::read_text(*first.report_dir / "heatmap_failure.csv");
  std::filesystem::remove_all(c.output_dir);
  const auto second = run_tournament(c, o);
  EXPECT_EQ(lbtest::read_text(second.ledger_path), ledger1);
  EXPECT_EQ(lbtest::read_text(*second.report_dir / "report.json"), report1);
  EXPECT_EQ(lbtest::read_text(*second.report_dir / "heatmap_failure.csv"), heat1);
}

// Report

TEST(Report, LayoutAndManifest) {
  TempDir dir("report");
  const auto c = arena_config(dir.path(), 4, 5);
  const auto run = run_tournament(c);
  ASSERT_TRUE(run.report_dir);
  const auto text = lbtest::read_text(*run.report_dir / "leaderboard.txt");
  std::istringstream header(text.substr(0, text.find('\n')));
  const std::vector<std::string> words{std::istream_iterator<std::string>(header), {}};
  EXPECT_EQ(words, (std::vector<std::string>{"Rank", "Model", "BT", "Rating", "95%", "CI", "Win", "Rate"}));
  const auto j = json::parse(lbtest::read_text(*run.report_dir / "report.json"));
  EXPECT_EQ(j["manifest"]["config_hash"], config_hash(c));
  EXPECT_EQ(j["manifest"]["seed"], c.seed);
  EXPECT_EQ(j["manifest"]["judge_id"], "oracle");
  // The frozen system text plus the raw user template.
  std::string frozen = lbtest::read_fixture("prompt/system.txt");
  frozen += '\0';
  frozen += judge::user_template();
  EXPECT_EQ(j["manifest"]["prompt_template_sha256"], sha256_hex(frozen));
  for (const char* key : {"tau", "tau_p_value", "transitivity", "alpha", "sigma_max", "sigma_mean"}) {
    EXPECT_TRUE(j["statistics"].contains(key)) << key;
  }
  EXPECT_EQ(j["leaderboard"].size(), 4u);
  EXPECT_EQ(j["leaderboard"][0]["model_id"], "m0");
  for (const char* f : {"leaderboard.csv", "winrate.csv", "heatmap_mechanism.csv", "heatmap_delivery.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(*run.report_dir / f)) << f;
  }
  // The same ledger reported from disk gives the same JSON.
  const auto loaded = load_ledger(run.ledger_path);
  ASSERT_TRUE(loaded.manifest);
  EXPECT_EQ(build_report(loaded.graph, settings_for(loaded), *loaded.manifest).json.dump(2) + "\n",
            lbtest::read_text(*run.report_dir / "report.json"));
}

TEST(Report, DisconnectedGraphKeepsStatistics) {
  auto g = lbtest::make_graph(4);
  lbtest::play(g, 0, 1, 1.0);
  lbtest::play(g, 0, 1, 0.0);
  lbtest::play(g, 2, 3, 1.0);
  lbtest::play(g, 2, 3, 0.0);
  RunManifest m;
  m.prompt_template_sha256 = prompt_template_hash();
  ReportSettings s;
  s.rating.bootstrap_iterations = 5;
  const auto r = build_report(g, s, m);
  ASSERT_TRUE(r.fit_error);
  EXPECT_TRUE(r.leaderboard.empty());
  EXPECT_TRUE(r.json["leaderboard"].is_null());
  EXPECT_FALSE(r.json["statistics"]["sigma_max"].is_null());
  EXPECT_NE(r.text.find("fit failed"), std::string::npos);
}

TEST(Report, AlphaFromAnnotations) {
  auto g = lbtest::make_graph(3);
  lbtest::play(g, 0, 1, 1.0);
  lbtest::play(g, 1, 2, 1.0);
  lbtest::play(g, 2, 0, 0.0);
  lbtest::play(g, 1, 0, 0.5);
  stats::AnnotationTable t;
  for (const char* u : {"u1", "u2", "u3"}) {
    t.add(u, "x", Decision::kA);
    t.add(u, "y", Decision::kA);
  }
  t.add("u4", "x", Decision::kB);
  t.add("u4", "y", Decision::kB);
  ReportSettings s;
  s.rating.bootstrap_iterations = 5;
  s.annotations = t;
  RunManifest m;
  const auto r = build_report(g, s, m);
  EXPECT_EQ(r.json["statistics"]["alpha"], 1.0);
  EXPECT_EQ(r.json["statistics"]["raw_agreement"], 1.0);
  EXPECT_EQ(r.json["statistics"]["transitivity"], 1.0);
}

// Simulation

TEST(Simulate, RecoversWellSeparatedOrder) {
  SimulationConfig c;
  c.models = 5;
  c.prompts = 10;
  c.spacing = 150;
  c.trials = 3;
  c.bootstrap_iterations = 20;
  const auto r = simulate(c);
  EXPECT_EQ(r.budget, 100);
  EXPECT_GE(r.mean_tau, 0.8);
  double mean = 0;
  for (double x : r.true_ratings) mean += x / 5;
  EXPECT_NEAR(mean, 1000.0, 1e-9);
  EXPECT_EQ(r.true_ratings.front() - r.true_ratings.back(), 600.0);
  EXPECT_EQ(to_json(r).dump(), to_json(simulate(c)).dump());
}

TEST(Simulate, ZeroSpacingIsChance) {
  SimulationConfig c;
  c.models = 5;
  c.prompts = 4;
  c.spacing = 0;
  c.trials = 40;
  c.bootstrap_iterations = 2;
  // Tau over 5 exchangeable items has sd about 0.41; 40 trials put 0.25 past 3.8 sd.
  EXPECT_LT(std::abs(simulate(c).mean_tau), 0.25);
}

TEST(Simulate, LessBudgetIsNoMoreInformative) {
  SimulationConfig c;
  c.models = 6;
  c.prompts = 6;
  c.spacing = 40;
  c.trials = 10;
  c.bootstrap_iterations = 2;
  const double full = simulate(c).mean_tau;
  c.budget_fraction = 0.5;
  const double half = simulate(c).mean_tau;
  EXPECT_LE(half, full + 0.1);
  c.budget_fraction = 1.5;
  EXPECT_THROW(simulate(c), ValidationError);
}
