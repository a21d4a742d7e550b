#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace laughboard {

struct ModelEntry {
  std::string model_id;
  std::string display_name;
  int registration_index = 0;
};

enum class TaskKind { kHeadline, kWordCombination };

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view text);

struct PromptItem {
  std::string prompt_id;
  std::string text;
  TaskKind task_kind = TaskKind::kHeadline;
};

struct Generation {
  std::string model_id;
  std::string prompt_id;
  std::string text;
};

enum class Decision { kA, kB, kTie };
enum class Confidence { kLow, kMedium, kHigh };

std::string_view to_string(Decision decision);
std::string_view to_string(Confidence confidence);

// Case-insensitive; returns nullopt for anything other than a/b/tie.
std::optional<Decision> parse_decision(std::string_view text);
std::optional<Confidence> parse_confidence(std::string_view text);

// Mirror a decision taken in presented order back to the other frame.
Decision swap_sides(Decision decision);

// 1.0 when side A wins, 0.5 on a tie, 0.0 otherwise.
double score_for_a(Decision decision);

struct JudgeVerdict {
  Decision decision = Decision::kTie;
  std::string reasoning;
  std::vector<std::string> winner_humor_features;
  std::vector<std::string> winner_delivery_features;
  std::vector<std::string> loser_features;
  std::optional<Confidence> confidence;

  bool operator==(const JudgeVerdict&) const = default;
};

// One adjudicated comparison. Sides are stored in canonical order (lower
// registration index first); position_seed_applied records whether the
// judge saw them the other way round.
//
// A tombstone marks an aborted adjudication or, when `voids` is set, retracts
// an earlier record. Tombstones and voided records are invisible to every
// estimator.
struct MatchRecord {
  std::int64_t match_id = 0;
  std::string prompt_id;
  std::string side_a_model;
  std::string side_b_model;
  bool position_seed_applied = false;
  JudgeVerdict verdict;
  double score_for_a = 0.5;
  std::string judge_id;
  std::string timestamp;
  double elo_delta_a = 0.0;
  bool tombstone = false;
  std::optional<std::int64_t> voids;

  bool operator==(const MatchRecord&) const = default;
};

}  // namespace laughboard
