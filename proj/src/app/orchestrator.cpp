#include "laughboard/app/orchestrator.hpp"

#include <chrono>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "laughboard/app/report.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/ledger_io.hpp"
#include "laughboard/core/parallel.hpp"
#include "laughboard/core/random.hpp"
#include "laughboard/judge/http_transport.hpp"
#include "laughboard/judge/llm_judge.hpp"
#include "laughboard/judge/oracle_judge.hpp"
#include "laughboard/rating/elo.hpp"

namespace laughboard::app {

std::string utc_now() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::unique_ptr<judge::Judge> make_judge(const TournamentConfig& config, bool trace) {
  const auto& jc = config.judge;
  if (jc.kind == judge::JudgeKind::kSyntheticOracle) {
    judge::OracleConfig oc;
    for (const auto& m : config.models) {
      if (!m.latent_rating) throw ValidationError("the oracle judge needs latent_rating for model '" + m.model_id + "'");
      oc.latent_ratings[m.model_id] = *m.latent_rating;
    }
    oc.tie_probability = config.oracle.tie_probability;
    oc.emit_features = config.oracle.emit_features;
    oc.seed = config.seed;
    return std::make_unique<judge::OracleJudge>(jc.judge_id, std::move(oc));
  }
  jc.validate();
  judge::HttpTransportOptions to;
  to.endpoint_url = *jc.endpoint_url;
  to.auth_env_var = jc.auth_env_var;
  to.timeout_seconds = jc.timeout_seconds;
  to.trace = trace;
  return std::make_unique<judge::LlmJudge>(jc, std::make_shared<judge::HttpChatTransport>(std::move(to)));
}

MatchHistoryGraph empty_graph(const TournamentConfig& config, const Dataset& dataset) {
  MatchHistoryGraph g;
  for (const auto& m : config.models) g.register_model(m.model_id, m.display_name);
  for (const auto& p : dataset.prompts) g.register_prompt(p);
  return g;
}

namespace {

void check_replayed(const MatchRecord& r, const scheduler::Pairing& p, std::int64_t expected_id) {
  if (r.match_id != expected_id || r.side_a_model != p.model_a || r.side_b_model != p.model_b ||
      r.prompt_id != p.prompt_id || r.voids) {
    throw FormatError(fmt::format(
        "ledger record {} ({} vs {} on {}) does not match the schedule ({} vs {} on {}); "
        "was it written with a different config or seed?",
        r.match_id, r.side_a_model, r.side_b_model, r.prompt_id, p.model_a, p.model_b, p.prompt_id));
  }
}

}  // namespace

PlayResult play_tournament(MatchHistoryGraph& graph, const TournamentConfig& config, const Dataset& dataset,
                           const judge::Judge& judge, std::span<const MatchRecord> prior,
                           const std::function<void(const MatchRecord&)>& sink, const PlayOptions& options) {
  if (!graph.records().empty()) throw ValidationError("play_tournament needs a graph without records");
  PlayResult result;
  auto tracking = rating::EloState::fresh(graph.models(), config.rating.k_factor, config.rating.initial);
  const auto eligibility = dataset.eligibility();
  std::size_t cursor = 0;

  // Replayed records keep their stored fields; only the tracking ratings move.
  const auto commit = [&](const MatchRecord& r) {
    if (!r.tombstone) rating::elo_update(tracking, r.side_a_model, r.side_b_model, r.score_for_a);
    graph.append_match(r);
  };

  while (true) {
    const scheduler::Ratings ratings(tracking.ratings.begin(), tracking.ratings.end());
    const auto plan = scheduler::next_round(graph, ratings, config.scheduler, eligibility);
    if (plan.exhausted || plan.pairings.empty()) {
      result.complete = true;
      break;
    }
    ++result.rounds;
    std::size_t i = 0;
    for (; i < plan.pairings.size() && cursor < prior.size(); ++i, ++cursor) {
      check_replayed(prior[cursor], plan.pairings[i], graph.next_match_id());
      commit(prior[cursor]);
      ++result.replayed;
    }
    if (i == plan.pairings.size()) continue;

    std::size_t n = plan.pairings.size() - i;
    if (options.stop_after_records) {
      const auto room = *options.stop_after_records - static_cast<std::int64_t>(graph.records().size());
      if (room <= 0) {
        result.interrupted = true;
        break;
      }
      n = std::min<std::size_t>(n, static_cast<std::size_t>(room));
    }
    const std::int64_t first_id = graph.next_match_id();
    std::vector<judge::Adjudication> outcomes(n);
    parallel_for(n, static_cast<unsigned>(config.judge.max_in_flight), [&](std::size_t k) {
      const auto& p = plan.pairings[i + k];
      const auto seed = rng::derive_seed(config.seed, kPositionStream, static_cast<std::uint64_t>(first_id) + k);
      const PromptItem& prompt = graph.prompt(graph.require_prompt(p.prompt_id));
      outcomes[k] = judge.adjudicate(prompt, dataset.generation(p.model_a, p.prompt_id),
                                     dataset.generation(p.model_b, p.prompt_id), seed);
    });

    std::size_t aborted = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& p = plan.pairings[i + k];
      const auto& o = outcomes[k];
      MatchRecord r;
      r.match_id = first_id + static_cast<std::int64_t>(k);
      r.prompt_id = p.prompt_id;
      r.side_a_model = p.model_a;
      r.side_b_model = p.model_b;
      r.position_seed_applied = o.swapped;
      r.judge_id = judge.judge_id();
      r.timestamp = options.clock ? options.clock() : std::string{};
      if (o.aborted) {
        r.tombstone = true;
        ++aborted;
        if (options.logger) options.logger->warn("match {} aborted: {}", r.match_id, o.error);
      } else {
        r.verdict = o.verdict;
        r.score_for_a = o.score_for_a;
        r.elo_delta_a = rating::elo_update(tracking, r.side_a_model, r.side_b_model, r.score_for_a).i;
      }
      if (sink) sink(r);
      graph.append_match(r);
      ++result.appended;
    }
    result.aborted += static_cast<std::int64_t>(aborted);
    if (options.logger) {
      options.logger->debug("round {}: {} pairings, {} active records", result.rounds, plan.pairings.size(),
                           graph.active_count());
    }
    if (aborted == n) {
      result.halted = true;
      break;
    }
    if (options.stop_after_records && static_cast<std::int64_t>(graph.records().size()) >= *options.stop_after_records &&
        i + n < plan.pairings.size()) {
      result.interrupted = true;
      break;
    }
  }
  if (cursor < prior.size() && !result.interrupted && !result.halted) {
    throw FormatError(fmt::format("ledger holds {} records beyond the schedule for this config",
                                  prior.size() - cursor));
  }
  return result;
}

std::filesystem::path ledger_path_in(const std::filesystem::path& output_dir) { return output_dir / "ledger.jsonl"; }
std::filesystem::path run_manifest_path_in(const std::filesystem::path& output_dir) { return output_dir / "run.json"; }

namespace {

bool same_registrations(const ledger::LedgerHeader& a, const ledger::LedgerHeader& b) {
  if (a.models.size() != b.models.size() || a.prompts.size() != b.prompts.size()) return false;
  for (std::size_t i = 0; i < a.models.size(); ++i) {
    if (a.models[i].model_id != b.models[i].model_id) return false;
  }
  for (std::size_t i = 0; i < a.prompts.size(); ++i) {
    const auto &x = a.prompts[i], &y = b.prompts[i];
    if (x.prompt_id != y.prompt_id || x.text != y.text || x.task_kind != y.task_kind) return false;
  }
  return true;
}

}  // namespace

RunResult run_tournament(const TournamentConfig& config, const judge::Judge& judge, const RunOptions& options) {
  config.validate();
  std::vector<std::string> ids;
  for (const auto& m : config.models) ids.push_back(m.model_id);
  const Dataset dataset = ingest_dataset(config.prompts_path, config.generations_path, ids);
  if (options.logger) {
    for (const auto& [model, prompt] : dataset.missing) {
      options.logger->warn("no generation by '{}' for prompt '{}'; its pairs skip that prompt", model, prompt);
    }
  }

  RunResult out;
  out.graph = empty_graph(config, dataset);
  std::filesystem::create_directories(config.output_dir);
  out.ledger_path = ledger_path_in(config.output_dir);

  auto header = ledger::header_from_graph(out.graph);
  header.prompts_path = std::filesystem::absolute(config.prompts_path).string();
  header.generations_path = std::filesystem::absolute(config.generations_path).string();
  const bool have_header = std::filesystem::exists(ledger::header_path_for(out.ledger_path));
  if (have_header) {
    if (!same_registrations(ledger::read_header(out.ledger_path), header)) {
      throw ValidationError("the ledger in " + config.output_dir.string() +
                            " was written for different models or prompts");
    }
  } else if (std::filesystem::exists(out.ledger_path) && std::filesystem::file_size(out.ledger_path) > 0) {
    throw FormatError("ledger " + out.ledger_path.string() + " has no header file");
  }
  if (!have_header) ledger::write_header(out.ledger_path, header);

  // Outcomes already on disk replay whatever the seed, so a changed seed or
  // judge would silently splice two different runs together.
  if (const auto previous = read_run_manifest(run_manifest_path_in(config.output_dir))) {
    if (previous->seed && *previous->seed != config.seed) {
      throw ValidationError(fmt::format("the ledger in {} was written with seed {}, not {}", config.output_dir.string(),
                                        *previous->seed, config.seed));
    }
    if (previous->judge_id && *previous->judge_id != config.judge.judge_id) {
      throw ValidationError("the ledger in " + config.output_dir.string() + " was written by judge '" +
                            *previous->judge_id + "'");
    }
  }
  {
    std::ofstream manifest(run_manifest_path_in(config.output_dir), std::ios::binary | std::ios::trunc);
    manifest << to_json(make_run_manifest(config)).dump(2) << '\n';
  }

  auto prior = ledger::read_records(out.ledger_path);
  if (prior.dropped_partial_tail && options.logger) options.logger->warn("dropping a torn last ledger line");
  ledger::LedgerWriter writer(out.ledger_path, ledger::intact_length(out.ledger_path));
  out.play = play_tournament(out.graph, config, dataset, judge, prior.records,
                             [&](const MatchRecord& r) { writer.append(r); }, options);

  if (!options.write_report) return out;
  if (!out.play.complete) {
    out.report_note = out.play.halted ? "the judge failed a whole round; ledger kept for resume"
                                      : "run interrupted before the schedule finished";
  } else if (out.graph.active_count() == 0) {
    out.report_note = "no completed matches; nothing to fit";
  } else {
    ReportSettings settings = settings_from_config(config);
    const auto report = build_report(out.graph, settings, make_run_manifest(config));
    out.report_dir = config.output_dir / "report";
    write_report(report, *out.report_dir);
    out.report_text = report.text;
  }
  return out;
}

RunResult run_tournament(const TournamentConfig& config, const RunOptions& options, bool trace) {
  const auto judge = make_judge(config, trace);
  return run_tournament(config, *judge, options);
}

}  // namespace laughboard::app
