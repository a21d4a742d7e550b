#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "laughboard/app/config.hpp"
#include "laughboard/app/dataset.hpp"
#include "laughboard/core/match_graph.hpp"
#include "laughboard/judge/judge.hpp"

namespace spdlog {
class logger;
}

namespace laughboard::app {

// Stream used to derive each match's position seed from the run seed.
inline constexpr std::uint64_t kPositionStream = 0x9051;

using Clock = std::function<std::string()>;

// ISO-8601 UTC, second resolution.
std::string utc_now();

// Builds the judge a config asks for. `trace` logs LLM traffic.
std::unique_ptr<judge::Judge> make_judge(const TournamentConfig& config, bool trace = false);

// Graph with the config's models and the dataset's prompts registered, no records.
MatchHistoryGraph empty_graph(const TournamentConfig& config, const Dataset& dataset);

struct PlayOptions {
  Clock clock = utc_now;
  // Stop once the ledger holds this many records, as if the process died there.
  std::optional<std::int64_t> stop_after_records;
  std::shared_ptr<spdlog::logger> logger;  // progress lines; silent when null
};

struct PlayResult {
  std::int64_t replayed = 0;  // records taken over from an existing ledger
  std::int64_t appended = 0;
  std::int64_t aborted = 0;   // tombstones among the appended records
  int rounds = 0;
  bool complete = false;  // the scheduler ran out of work
  bool halted = false;    // a whole round aborted; the judge looks down
  bool interrupted = false;
};

// Runs scheduler rounds over `graph`, which must hold the registrations of
// empty_graph(). `prior` are records from an earlier run: they are checked
// against the replayed schedule and re-appended instead of adjudicated.
// New records go to `sink` (in ledger order) before joining the graph.
PlayResult play_tournament(MatchHistoryGraph& graph, const TournamentConfig& config, const Dataset& dataset,
                           const judge::Judge& judge, std::span<const MatchRecord> prior = {},
                           const std::function<void(const MatchRecord&)>& sink = {},
                           const PlayOptions& options = {});

struct RunResult {
  PlayResult play;
  MatchHistoryGraph graph;
  std::filesystem::path ledger_path;
  std::optional<std::filesystem::path> report_dir;  // set when a report was written
  std::string report_text;
  std::string report_note;  // why no report was written
};

struct RunOptions : PlayOptions {
  bool write_report = true;
};

// File-backed tournament under config.output_dir: ledger.jsonl, its header
// and run.json. Picks up an existing ledger where it stopped.
RunResult run_tournament(const TournamentConfig& config, const judge::Judge& judge, const RunOptions& options = {});
RunResult run_tournament(const TournamentConfig& config, const RunOptions& options = {}, bool trace = false);

std::filesystem::path ledger_path_in(const std::filesystem::path& output_dir);
std::filesystem::path run_manifest_path_in(const std::filesystem::path& output_dir);

}  // namespace laughboard::app
