#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laughboard/app/config.hpp"
#include "laughboard/core/match_graph.hpp"
#include "laughboard/rating/leaderboard.hpp"
#include "laughboard/stats/agreement.hpp"

namespace laughboard::app {

inline constexpr std::string_view kReportFormat = "laughboard-report/1";

// What produced a ledger. Fields are unknown (null) for a bare ledger.
struct RunManifest {
  std::optional<std::string> config_hash;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> judge_id;
  std::string prompt_template_sha256;
  nlohmann::ordered_json config;  // null when unknown
};

// SHA-256 over the judge's system and user templates.
std::string prompt_template_hash();

RunManifest make_run_manifest(const TournamentConfig& config);
nlohmann::ordered_json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);
std::optional<RunManifest> read_run_manifest(const std::filesystem::path& path);

struct ReportSettings {
  RatingConfig rating;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Leaderboard to compare against for tau; Stable Elo's order when empty.
  std::vector<std::string> reference_order;
  std::optional<stats::AnnotationTable> annotations;  // alpha stays null without
};

ReportSettings settings_from_config(const TournamentConfig& config);

struct Report {
  std::vector<rating::LeaderboardRow> leaderboard;  // empty when the fit failed
  std::optional<std::string> fit_error;
  nlohmann::ordered_json json;
  std::string text;
  std::string leaderboard_csv;
  std::string winrate_csv;
  std::map<std::string, std::string> heatmap_csv;  // axis name -> CSV
};

// Fits and tabulates a sealed ledger. Throws ValidationError when there is
// nothing to fit. A disconnected graph still yields statistics with
// fit_error set.
Report build_report(const MatchHistoryGraph& graph, const ReportSettings& settings, const RunManifest& manifest);

// leaderboard.txt/.csv, report.json, winrate.csv, heatmap_<axis>.csv.
void write_report(const Report& report, const std::filesystem::path& dir);

struct LoadedLedger {
  MatchHistoryGraph graph;
  std::optional<RunManifest> manifest;  // run.json beside the ledger
  bool dropped_partial_tail = false;
};

LoadedLedger load_ledger(const std::filesystem::path& ledger_path);

// Rating settings and seed come from the manifest when there is one.
ReportSettings settings_for(const LoadedLedger& ledger);

}  // namespace laughboard::app
