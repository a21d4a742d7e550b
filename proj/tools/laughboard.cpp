#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "laughboard/app/annotation.hpp"
#include "laughboard/app/orchestrator.hpp"
#include "laughboard/app/report.hpp"
#include "laughboard/app/simulate.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/ledger_io.hpp"

namespace lb = laughboard;
namespace app = laughboard::app;

namespace {

int cmd_run(const std::string& config_path, std::optional<std::int64_t> budget, std::optional<std::uint64_t> seed,
            const std::string& judge_kind, bool trace, const std::string& output_dir) {
  auto config = app::load_config(config_path);
  if (budget) {
    config.scheduler.exhaustive = false;
    config.scheduler.c_max = *budget;
  }
  if (seed) config.seed = *seed;
  if (!judge_kind.empty()) config.judge.kind = lb::judge::parse_judge_kind(judge_kind);
  if (!output_dir.empty()) config.output_dir = output_dir;
  config.validate();

  app::RunOptions options;
  options.logger = spdlog::default_logger();
  const auto result = app::run_tournament(config, options, trace);
  const auto& p = result.play;
  spdlog::info("ledger {}: {} replayed, {} new ({} aborted) over {} rounds", result.ledger_path.string(), p.replayed,
               p.appended, p.aborted, p.rounds);
  if (result.report_dir) {
    std::cout << result.report_text;
    spdlog::info("report written to {}", result.report_dir->string());
  } else if (!result.report_note.empty()) {
    spdlog::warn("no report: {}", result.report_note);
  }
  return p.halted ? 3 : 0;
}

app::LoadedLedger load(const std::string& path) {
  auto ledger = app::load_ledger(path);
  if (ledger.dropped_partial_tail) spdlog::warn("ignoring a torn last line in {}", path);
  return ledger;
}

app::RunManifest manifest_of(const app::LoadedLedger& ledger) {
  if (ledger.manifest) return *ledger.manifest;
  app::RunManifest m;
  m.prompt_template_sha256 = app::prompt_template_hash();
  return m;
}

int cmd_rank(const std::string& ledger_path) {
  const auto ledger = load(ledger_path);
  const auto report = app::build_report(ledger.graph, app::settings_for(ledger), manifest_of(ledger));
  std::cout << report.text.substr(0, report.text.find("\n\n") + 1);
  return report.fit_error ? 4 : 0;
}

int cmd_report(const std::string& ledger_path, const std::string& format, const std::string& out_dir,
               const std::string& votes, const std::vector<std::string>& reference) {
  const auto ledger = load(ledger_path);
  auto settings = app::settings_for(ledger);
  settings.reference_order = reference;
  if (!votes.empty()) settings.annotations = app::annotation::load_annotation_table(votes);
  const auto report = app::build_report(ledger.graph, settings, manifest_of(ledger));
  if (format == "json") {
    std::cout << report.json.dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << report.leaderboard_csv;
  } else {
    std::cout << report.text;
  }
  if (!out_dir.empty()) app::write_report(report, out_dir);
  if (report.fit_error) spdlog::error("fit failed: {}", *report.fit_error);
  return report.fit_error ? 4 : 0;
}

int cmd_simulate(const app::SimulationConfig& config, bool as_json) {
  const auto report = app::simulate(config);
  if (as_json) {
    std::cout << app::to_json(report).dump(2) << '\n';
  } else {
    std::cout << app::format_text(report);
  }
  return 0;
}

int cmd_serve(const std::string& ledger_path, std::size_t sample, const std::string& host, int port,
              std::uint64_t seed, std::string votes, const std::string& origin) {
  const auto ledger = load(ledger_path);
  const auto header = lb::ledger::read_header(ledger_path);
  std::vector<std::string> ids;
  for (const auto& m : header.models) ids.push_back(m.model_id);
  const auto dataset = app::ingest_dataset(header.prompts_path, header.generations_path, ids);
  if (votes.empty()) votes = (std::filesystem::path(ledger_path).parent_path() / "votes.jsonl").string();
  auto store = std::make_shared<app::annotation::AnnotationStore>(
      app::annotation::sample_units(ledger.graph, dataset, sample, seed), seed, votes);
  app::annotation::ServerOptions options;
  options.allowed_origin = origin;
  app::annotation::AnnotationServer server(store, options);
  const int bound = server.bind(host, port);
  spdlog::info("serving {} units on http://{}:{} (votes in {})", sample, host, bound, votes);
  server.serve();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("laughboard"));
  spdlog::set_pattern("%^%l%$: %v");

  CLI::App cli{"Pairwise tournament ratings for generated jokes"};
  cli.require_subcommand(1);

  auto* run = cli.add_subcommand("run", "Run (or resume) a tournament from a config file");
  std::string config_path, judge_kind, output_dir;
  std::optional<std::int64_t> budget;
  std::optional<std::uint64_t> seed;
  bool trace = false;
  run->add_option("--config", config_path, "Tournament config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--budget", budget, "Total comparisons (overrides exhaustive coverage)")->check(CLI::NonNegativeNumber);
  run->add_option("--seed", seed, "Root seed");
  run->add_option("--judge", judge_kind, "Judge kind")->check(CLI::IsMember({"llm", "oracle"}));
  run->add_option("--output", output_dir, "Output directory (overrides the config)");
  run->add_flag("--trace", trace, "Log judge requests and replies");

  auto* rank = cli.add_subcommand("rank", "Print the Bradley-Terry leaderboard of a ledger");
  std::string ledger_path;
  rank->add_option("--ledger", ledger_path, "Ledger file")->required();

  auto* report = cli.add_subcommand("report", "Fit a ledger and print or write the report");
  std::string format = "text", out_dir, votes;
  std::vector<std::string> reference;
  report->add_option("--ledger", ledger_path, "Ledger file")->required();
  report->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  report->add_option("--out", out_dir, "Also write the full report bundle here");
  report->add_option("--votes", votes, "Annotation votes file for Krippendorff's alpha");
  report->add_option("--reference", reference, "Reference leaderboard order for Kendall's tau")->delimiter(',');

  auto* simulate = cli.add_subcommand("simulate", "Rank recovery on synthetic oracle tournaments");
  app::SimulationConfig sim;
  bool sim_json = false;
  simulate->add_option("--models", sim.models, "Number of models")->capture_default_str();
  simulate->add_option("--prompts", sim.prompts, "Number of prompts")->capture_default_str();
  simulate->add_option("--spacing", sim.spacing, "Elo gap between neighbours")->capture_default_str();
  simulate->add_option("--budget-fraction", sim.budget_fraction, "Share of the exhaustive budget")->capture_default_str();
  simulate->add_option("--trials", sim.trials, "Independent tournaments")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Root seed")->capture_default_str();
  simulate->add_option("--bootstrap", sim.bootstrap_iterations, "Bootstrap iterations")->capture_default_str();
  simulate->add_option("--ties", sim.tie_probability, "Oracle tie probability")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Estimator threads")->capture_default_str();
  simulate->add_flag("--json", sim_json, "Print JSON");

  auto* serve = cli.add_subcommand("serve", "Serve the blind annotation API for a ledger");
  std::size_t sample = 60;
  int port = 8080;
  std::string host = "127.0.0.1", origin = "*", votes_path;
  std::uint64_t serve_seed = 0;
  serve->add_option("--ledger", ledger_path, "Ledger file")->required();
  serve->add_option("--sample", sample, "Units to sample")->capture_default_str();
  serve->add_option("--port", port, "Port (0 picks one)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--seed", serve_seed, "Sampling and A/B swap seed")->capture_default_str();
  serve->add_option("--votes", votes_path, "Votes file (default: votes.jsonl beside the ledger)");
  serve->add_option("--origin", origin, "Allowed CORS origin")->capture_default_str();

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*run) return cmd_run(config_path, budget, seed, judge_kind, trace, output_dir);
    if (*rank) return cmd_rank(ledger_path);
    if (*report) return cmd_report(ledger_path, format, out_dir, votes, reference);
    if (*simulate) return cmd_simulate(sim, sim_json);
    if (*serve) return cmd_serve(ledger_path, sample, host, port, serve_seed, votes_path, origin);
  } catch (const lb::Error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("unexpected: {}", e.what());
    return 1;
  }
  return 0;
}
